from __future__ import annotations

from functools import lru_cache

import pytest

from wreathdc.geometry import build_ball, standard_genset
from wreathdc.lamps import CyclicLamps, IntegerLamps, TableLamps, bundled_table

SPECS = {
    "C2": CyclicLamps(2),
    "C3": CyclicLamps(3),
    "Z": IntegerLamps(),
    "S3": TableLamps(bundled_table("S3")),
    "C2xC2": TableLamps(bundled_table("C2xC2")),
}

# the four lamp families the engine is cross-checked on
FAMILIES = ("C2", "C3", "Z", "S3")


@lru_cache(maxsize=None)
def ball(name: str, n: int):
    spec = SPECS[name]
    return build_ball(spec, standard_genset(spec), n)


@pytest.fixture
def c2():
    return SPECS["C2"]


@pytest.fixture
def zz():
    return SPECS["Z"]
