"""Plain-text exports.  Every float is written with 17 significant digits."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .kernels import DenseKernel, Kernel
from .spectra import Spectrum

__all__ = ["fmt", "write_csv", "read_csv", "write_spectrum", "read_spectrum", "write_kernel_csv", "write_moment_table"]


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])
    return path


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_spectrum(path, spectrum: Spectrum) -> Path:
    """One eigenvalue per line, ascending."""
    path = Path(path)
    path.write_text("".join(fmt(v) + "\n" for v in spectrum.values))
    return path


def read_spectrum(path) -> Spectrum:
    return Spectrum(np.array([float(x) for x in Path(path).read_text().split()]))


def write_kernel_csv(path, kernel: Kernel) -> Path:
    """Dense: ``(i, j, K_ij)`` for nonzero entries.  Chain: ``(i, c_i, a_i, b_i)``.

    States are 1-based.
    """
    if isinstance(kernel, DenseKernel):
        rows_i, cols_j = np.nonzero(kernel.K)
        return write_csv(
            path, ["i", "j", "K"], ((i + 1, j + 1, kernel.K[i, j]) for i, j in zip(rows_i, cols_j))
        )
    return write_csv(
        path,
        ["i", "c", "a", "b"],
        ((i + 1, kernel.c[i], kernel.a[i], kernel.b[i]) for i in range(kernel.n)),
    )


def write_moment_table(path, moments: Sequence[tuple[int, float]]) -> Path:
    return write_csv(path, ["k", "moment"], moments)
