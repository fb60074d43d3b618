"""Reader for the frontier/trials CSV contract.

A conforming file has the header ``alpha_1,...,alpha_K,revenue,ope_mse,
random_ratio`` (K >= 1) and one row per evaluated mixture ratio.  ``ope_mse``
may be ``inf`` for mixtures whose evaluation policy is unsupported; every
other value must be finite, and ``random_ratio`` must repeat ``alpha_1``
exactly.  All violations raise :class:`CsvFormatError` naming the line.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

TAIL_COLUMNS = ("revenue", "ope_mse", "random_ratio")


class CsvFormatError(ValueError):
    """The file does not follow the frontier CSV contract."""


@dataclass(frozen=True)
class PointTable:
    """One parsed point list: mixture ratios plus both objective columns."""

    path: str
    alphas: np.ndarray  # (n, k)
    revenue: np.ndarray  # (n,)
    ope_mse: np.ndarray  # (n,)

    @property
    def n(self) -> int:
        return self.revenue.size

    @property
    def k(self) -> int:
        return self.alphas.shape[1]

    @property
    def random_ratio(self) -> np.ndarray:
        return self.alphas[:, 0]


def _parse_header(header, path):
    k = 0
    while k < len(header) and header[k] == f"alpha_{k + 1}":
        k += 1
    if k == 0 or tuple(header[k:]) != TAIL_COLUMNS:
        raise CsvFormatError(
            f"{path}: line 1: expected header alpha_1..alpha_K,revenue,ope_mse,random_ratio, "
            f"got {','.join(header) or '(empty)'}"
        )
    return k


def _parse_cell(text, column, line, path) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CsvFormatError(f"{path}: line {line}: {column} value {text!r} is not a number") from None
    if math.isnan(value):
        raise CsvFormatError(f"{path}: line {line}: {column} is NaN")
    return value


def read_points(path) -> PointTable:
    """Parse one conforming CSV file into arrays; raise CsvFormatError otherwise."""
    path = str(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: file is empty") from None
        k = _parse_header(header, path)
        width = k + len(TAIL_COLUMNS)

        alphas, revenue, ope_mse = [], [], []
        for line, row in enumerate(reader, start=2):
            if len(row) != width:
                raise CsvFormatError(
                    f"{path}: line {line}: expected {width} cells, got {len(row)}"
                )
            cells = [
                _parse_cell(text, column, line, path)
                for text, column in zip(row, header)
            ]
            alpha, (rev, mse, ratio) = cells[:k], cells[k:]
            for i, a in enumerate(alpha):
                if not math.isfinite(a) or a < 0.0 or a > 1.0 + 1e-9:
                    raise CsvFormatError(
                        f"{path}: line {line}: alpha_{i + 1}={a!r} is outside [0, 1]"
                    )
            if not math.isfinite(rev):
                raise CsvFormatError(f"{path}: line {line}: revenue must be finite, got {rev!r}")
            if mse < 0.0:
                raise CsvFormatError(f"{path}: line {line}: ope_mse must be >= 0, got {mse!r}")
            if ratio != alpha[0]:
                raise CsvFormatError(
                    f"{path}: line {line}: random_ratio {ratio!r} does not equal alpha_1 {alpha[0]!r}"
                )
            alphas.append(alpha)
            revenue.append(rev)
            ope_mse.append(mse)

    if not revenue:
        raise CsvFormatError(f"{path}: no data rows")
    return PointTable(
        path=path,
        alphas=np.array(alphas),
        revenue=np.array(revenue),
        ope_mse=np.array(ope_mse),
    )
