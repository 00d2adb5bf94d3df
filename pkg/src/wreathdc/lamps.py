"""Lamp groups: finite cyclic, the integers, or a finite group given by table.

Lamp values are plain ints everywhere. The identity is always 0: residues
mod q for cyclic lamps, integers for Z lamps, table indices for tables.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Union

import numpy as np

__all__ = [
    "TableError",
    "FiniteGroupTable",
    "CyclicLamps",
    "IntegerLamps",
    "TableLamps",
    "LampGroupSpec",
    "parse_table",
    "load_table",
    "bundled_table",
    "BUNDLED_TABLES",
]

BUNDLED_TABLES = ("C2", "C2xC2", "S3", "D4", "Q8")


class TableError(ValueError):
    """A multiplication table violates a group axiom or is malformed."""


@dataclass(frozen=True)
class FiniteGroupTable:
    """Finite group by explicit multiplication table, identity at index 0.

    ``product[x][y]`` is the index of x*y. The inverse table is derived.
    Construction validates closure, identity, inverses and associativity
    (exhaustively; fine for the orders this package deals with).
    """

    product: tuple[tuple[int, ...], ...]
    name: str = field(default="F", compare=False)

    def __post_init__(self) -> None:
        _validate(self.product)

    @property
    def order(self) -> int:
        return len(self.product)

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.product)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.product, dtype=np.int64)

    @cached_property
    def digest(self) -> str:
        flat = " ".join(str(v) for row in self.product for v in row)
        return hashlib.sha256(flat.encode()).hexdigest()[:12]

    def mul(self, x: int, y: int) -> int:
        return self.product[x][y]

    @cached_property
    def abelian(self) -> bool:
        m = self.order
        return all(self.product[x][y] == self.product[y][x] for x in range(m) for y in range(m))

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.product[y][x]
            k += 1
        return k

    def conjugacy_classes(self) -> list[list[int]]:
        m = self.order
        seen: set[int] = set()
        classes = []
        for x in range(m):
            if x in seen:
                continue
            cls = sorted({self.product[self.product[self.inverse[g]][x]][g] for g in range(m)})
            seen.update(cls)
            classes.append(cls)
        return classes


def _validate(product: tuple[tuple[int, ...], ...]) -> None:
    m = len(product)
    if m < 1:
        raise TableError("empty table")
    for x, row in enumerate(product):
        if len(row) != m:
            raise TableError(f"row {x} has {len(row)} entries, expected {m}")
        for y, v in enumerate(row):
            if not 0 <= v < m:
                raise TableError(f"closure fails: {x}*{y} = {v} is outside [0, {m})")
    for x in range(m):
        if product[0][x] != x or product[x][0] != x:
            raise TableError(f"identity law fails at x={x}: 0*x={product[0][x]}, x*0={product[x][0]}")
    for x in range(m):
        if 0 not in product[x]:
            raise TableError(f"inverse law fails: x={x} has no right inverse")
        y = product[x].index(0)
        if product[y][x] != 0:
            raise TableError(f"inverse law fails: x={x}, y={y} with x*y=0 but y*x={product[y][x]}")
    for x, y, z in itertools.product(range(m), repeat=3):
        if product[product[x][y]][z] != product[x][product[y][z]]:
            raise TableError(f"associativity fails at (x, y, z) = ({x}, {y}, {z})")


def parse_table(text: str, name: str = "F") -> FiniteGroupTable:
    """Parse ``m`` followed by m*m row-major indices."""
    tokens = text.split()
    if not tokens:
        raise TableError("empty table file")
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise TableError(f"non-integer token: {exc}") from None
    m, entries = values[0], values[1:]
    if m < 1:
        raise TableError(f"order must be positive, got {m}")
    if len(entries) != m * m:
        raise TableError(f"expected {m * m} entries after the order, got {len(entries)}")
    product = tuple(tuple(entries[r * m:(r + 1) * m]) for r in range(m))
    return FiniteGroupTable(product, name=name)


def load_table(path: str | Path) -> FiniteGroupTable:
    path = Path(path)
    return parse_table(path.read_text(), name=path.stem)


def bundled_table(name: str) -> FiniteGroupTable:
    if name not in BUNDLED_TABLES:
        raise KeyError(f"unknown bundled table {name!r}; have {', '.join(BUNDLED_TABLES)}")
    text = resources.files("wreathdc.data").joinpath(f"{name}.txt").read_text()
    return parse_table(text, name=name)


@dataclass(frozen=True)
class CyclicLamps:
    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"cyclic lamp group needs q >= 2, got {self.q}")

    @property
    def ident(self) -> str:
        return f"C{self.q}"

    @property
    def order(self) -> int | None:
        return self.q

    abelian = True

    def mul(self, x: int, y: int) -> int:
        return (x + y) % self.q

    def inv(self, x: int) -> int:
        return -x % self.q

    def cost(self, x: int) -> int:
        """Distance of x from 0 in the Cayley graph of C_q w.r.t. {1}."""
        return min(x, self.q - x)

    def element_order(self, x: int) -> int | None:
        return self.q // gcd(x, self.q)

    def generators(self) -> list[int]:
        return [1]

    def label(self, x: int) -> str:
        return str(x)


@dataclass(frozen=True)
class IntegerLamps:
    @property
    def ident(self) -> str:
        return "Z"

    @property
    def order(self) -> int | None:
        return None

    abelian = True

    def mul(self, x: int, y: int) -> int:
        return x + y

    def inv(self, x: int) -> int:
        return -x

    def cost(self, x: int) -> int:
        return abs(x)

    def element_order(self, x: int) -> int | None:
        return 1 if x == 0 else None

    def generators(self) -> list[int]:
        return [1]

    def label(self, x: int) -> str:
        return str(x)


@dataclass(frozen=True)
class TableLamps:
    table: FiniteGroupTable

    @property
    def ident(self) -> str:
        name = self.table.name.replace("|", "_")
        return f"table:{name}:{self.table.digest}"

    @property
    def order(self) -> int | None:
        return self.table.order

    @property
    def abelian(self) -> bool:
        return self.table.abelian

    def mul(self, x: int, y: int) -> int:
        return self.table.product[x][y]

    def inv(self, x: int) -> int:
        return self.table.inverse[x]

    def cost(self, x: int) -> int:
        # every non-trivial element is a generator
        return 0 if x == 0 else 1

    def element_order(self, x: int) -> int | None:
        return self.table.element_order(x)

    def generators(self) -> list[int]:
        return list(range(1, self.table.order))

    def label(self, x: int) -> str:
        return f"x{x}"


LampGroupSpec = Union[CyclicLamps, IntegerLamps, TableLamps]
