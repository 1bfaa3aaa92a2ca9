"""Central WENO reconstructions of orders 3 to 9 and a 1D finite-volume
solver, with an experiment harness and a command-line front end."""

__version__ = "0.1.0"

from .cweno import (CwenoConfig, CwenoResult, cweno3_disc_ratio,
                    cweno3_disc_ratio_closed_form, cweno_reconstruct,
                    linear_coefficients, reconstruct_windows,
                    weno_optimal_weights, weno_reconstruct_point)
from .grid import (Grid1D, fill_ghost, ghost_centers, ghost_sizes,
                   make_random_nonuniform, make_uniform)
from .harness import (cell_averages, convergence_rates, error_1norm,
                      read_csv, restrict_to, run_convergence, run_disc_scan,
                      run_lake_at_rest, run_named_test, run_property_r,
                      total_variation, write_csv, write_solution_csv)
from .models import (InvalidStateError, ModelSpec, SingularPointError,
                     advection, burgers, euler, euler_radial, shallow_water)
from .poly import Poly, build_diff_table, gamma_nonuniform, gamma_uniform
from .smoothness import jiang_shu, unit_quadratic_form
from .solver import (BlowupError, Field, ReconstructedField, RunConfig,
                     cfl_dt, llf_flux, parse_tableau_file, reconstruct_field,
                     run_to_time, semidiscrete_rhs)

__all__ = [
    "BlowupError", "CwenoConfig", "CwenoResult", "Field", "Grid1D",
    "InvalidStateError", "ModelSpec", "Poly", "ReconstructedField",
    "RunConfig", "SingularPointError", "advection", "build_diff_table",
    "burgers", "cell_averages", "cfl_dt", "convergence_rates",
    "cweno3_disc_ratio", "cweno3_disc_ratio_closed_form",
    "cweno_reconstruct", "error_1norm", "euler", "euler_radial",
    "fill_ghost", "gamma_nonuniform", "gamma_uniform", "ghost_centers",
    "ghost_sizes", "jiang_shu", "linear_coefficients", "llf_flux",
    "make_random_nonuniform", "make_uniform", "parse_tableau_file",
    "read_csv", "reconstruct_field", "reconstruct_windows", "restrict_to",
    "run_convergence", "run_disc_scan", "run_lake_at_rest",
    "run_named_test", "run_property_r", "run_to_time", "semidiscrete_rhs",
    "shallow_water", "total_variation", "unit_quadratic_form",
    "weno_optimal_weights", "weno_reconstruct_point", "write_csv",
    "write_solution_csv",
]
