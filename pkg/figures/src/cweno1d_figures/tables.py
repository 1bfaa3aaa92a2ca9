"""Reading and checking the CSV tables the cweno1d command line emits.

Each file carries one ``# key=value ...`` metadata comment, a header row,
then numeric rows.
"""

import os

import numpy as np


class FigureDataError(ValueError):
    """Input tables are missing, unreadable, or shaped wrong for a recipe."""


def read_table(path) -> tuple:
    """(metadata dict, column list, float array) from one CSV file."""
    metadata = {}
    columns = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    key, _, value = token.partition("=")
                    metadata[key] = value
                continue
            if columns is None:
                columns = line.split(",")
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError:
                raise FigureDataError(f"{path}: non-numeric row {line!r}")
    if columns is None:
        raise FigureDataError(f"{path} has no header row")
    return metadata, columns, np.array(rows, dtype=float)


def check_columns(path, columns, expected) -> None:
    if list(columns) != list(expected):
        raise FigureDataError(
            f"{path} does not match the expected schema: expected columns "
            f"{','.join(expected)}, found {','.join(columns)}")


def list_csvs(in_dir) -> list:
    if not os.path.isdir(in_dir):
        raise FigureDataError(f"input directory {in_dir} does not exist")
    names = sorted(n for n in os.listdir(in_dir) if n.endswith(".csv"))
    if not names:
        raise FigureDataError(
            f"input directory {in_dir} contains no CSV files; write some"
            f" with the cweno1d command line, e.g."
            f" cweno1d solve --test burgers --out {in_dir}")
    return [os.path.join(in_dir, n) for n in names]
