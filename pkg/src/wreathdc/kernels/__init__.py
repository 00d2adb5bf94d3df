"""Array encoding of balls and the hot pair-counting kernels.

Two interchangeable backends live here: ``_numba`` (``@njit``, parallel over
rows) and ``_numpy`` (vectorised fallback). ``WREATH_DC_KERNEL=numpy`` forces
the fallback; otherwise numba is used when it imports.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from types import ModuleType

import numpy as np

from ..element import WreathElement
from ..lamps import CyclicLamps, IntegerLamps, LampGroupSpec, TableLamps
from . import _numpy

__all__ = ["BallArrays", "get_backend", "available_backends"]

_HASH_SEED = 0x5EED_0F_1A3B


def available_backends() -> list[str]:
    names = ["numpy"]
    try:
        from . import _numba  # noqa: F401
    except ImportError:
        return names
    return ["numba", *names]


def get_backend(name: str | None = None) -> ModuleType:
    name = name or os.environ.get("WREATH_DC_KERNEL", "numba")
    if name == "numpy":
        return _numpy
    if name != "numba":
        raise ValueError(f"unknown kernel backend {name!r} (expected 'numba' or 'numpy')")
    try:
        from . import _numba
    except ImportError:
        return _numpy
    return _numba


@dataclass
class BallArrays:
    """Elements as rows of a dense lamp matrix.

    Column ``center + p`` holds the lamp at position p. Ball supports lie in
    [-R, R] and shifts in [-K, K]; the matrix is padded to [-R-2K, R+2K] so
    every index a kernel touches stays in range.
    """

    lamps: np.ndarray
    shifts: np.ndarray
    center: int
    support_radius: int
    max_shift: int
    mode: int
    q: int
    table: np.ndarray
    table_inv: np.ndarray

    @classmethod
    def from_elements(cls, spec: LampGroupSpec, elements: list[WreathElement]) -> BallArrays:
        R = max((abs(p) for g in elements for p, _ in g.lamps), default=0)
        K = max((abs(g.shift) for g in elements), default=0)
        center = R + 2 * K
        big = max((abs(v) for g in elements for _, v in g.lamps), default=0)
        big = max(big, getattr(spec, "q", 0), spec.order or 0)
        # int16 leaves headroom for the sum of two lamp values before reduction
        dtype = np.int16 if 2 * big < 2**15 else np.int64
        lamps = np.zeros((len(elements), 2 * center + 1), dtype=dtype)
        shifts = np.empty(len(elements), dtype=np.int64)
        for i, g in enumerate(elements):
            shifts[i] = g.shift
            for p, v in g.lamps:
                lamps[i, center + p] = v
        dummy = np.zeros((1, 1), dtype=np.int64)
        if isinstance(spec, CyclicLamps):
            mode, q, table, table_inv = 0, spec.q, dummy, dummy[0]
        elif isinstance(spec, IntegerLamps):
            mode, q, table, table_inv = 1, 1, dummy, dummy[0]
        elif isinstance(spec, TableLamps):
            mode, q = 2, 1
            table = spec.table.array
            table_inv = np.array(spec.table.inverse, dtype=np.int64)
        else:
            raise TypeError(f"unsupported lamp group {spec!r}")
        return cls(lamps, shifts, center, R, K, mode, q, table, table_inv)

    def __len__(self) -> int:
        return self.lamps.shape[0]

    @property
    def span(self) -> tuple[int, int]:
        """Column range a commutation check has to inspect."""
        return self.center - self.support_radius - self.max_shift, self.center + self.support_radius + self.max_shift

    @property
    def window(self) -> tuple[int, int]:
        """Column range that can hold a lamp of a ball element."""
        return self.center - self.support_radius, self.center + self.support_radius

    @cached_property
    def weights(self) -> np.ndarray:
        rng = np.random.default_rng(_HASH_SEED)
        return rng.integers(-(2**62), 2**62, size=self.lamps.shape[1] + 1, dtype=np.int64)

    def _args(self):
        lo, hi = self.span
        return lo, hi, self.mode, self.q, self.table

    def count_pairs(self, rows: np.ndarray | None = None, backend: str | None = None) -> int:
        """Ordered commuting pairs among ``rows`` (all rows by default)."""
        kern = get_backend(backend)
        if rows is None:
            rows = np.arange(len(self), dtype=np.int64)
        if rows.shape[0] == 0:
            return 0
        return int(kern.count_pairs(self.lamps, self.shifts, rows.astype(np.int64), *self._args()))

    def commute_row(self, a: int, backend: str | None = None) -> np.ndarray:
        kern = get_backend(backend)
        return np.asarray(kern.commute_row(self.lamps, self.shifts, a, *self._args()))

    @cached_property
    def _hash_index(self) -> tuple[np.ndarray, np.ndarray]:
        wlo, whi = self.window
        h = _numpy.row_hashes(self.lamps, self.shifts, self.weights[:-1], wlo, whi, self.weights[-1])
        order = np.argsort(h, kind="stable")
        return h[order], order.astype(np.int64)

    def count_solved(self, arows: np.ndarray, backend: str | None = None) -> int:
        """Ordered commuting pairs (a, b) with a in ``arows`` and b any non-base ball row.

        Every row in ``arows`` must have a non-zero shift.
        """
        kern = get_backend(backend)
        if arows.shape[0] == 0:
            return 0
        if np.any(self.shifts[arows] == 0):
            raise ValueError("count_solved needs non-base rows")
        targets = np.unique(self.shifts[self.shifts != 0]).astype(np.int64)
        lo, hi = self.span
        wlo, whi = self.window
        sorted_hashes, order = self._hash_index
        return int(kern.count_solved(
            self.lamps, self.shifts, arows.astype(np.int64), targets, lo, hi, wlo, whi,
            self.mode, self.q, self.table, self.table_inv,
            self.weights[:-1], self.weights[-1], sorted_hashes, order))


def set_threads(n: int, backend: str | None = None) -> None:
    get_backend(backend).set_threads(n)
