"""Elements of L wr Z and their arithmetic.

An element is a finitely supported lamp configuration ``f`` together with a
shift ``k``; it stands for ``f t^k``. Conjugation by t moves lamps up by one
position: ``t a_i t^-1 = a_{i+1}``, so ``(f, k) * (g, l) = (f * shift_k(g), k + l)``
where ``shift_k(g)(i) = g(i - k)``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .lamps import LampGroupSpec

__all__ = [
    "SpecMismatchError",
    "WreathElement",
    "identity",
    "head",
    "lamp",
    "from_lamps",
    "multiply",
    "inverse",
    "conjugate",
    "commutes",
    "power",
    "support_extrema",
    "canonical_key",
]


class SpecMismatchError(ValueError):
    pass


class WreathElement:
    """Immutable element ``f t^k``.

    ``lamps`` is a tuple of ``(position, value)`` pairs sorted by position,
    never containing the lamp identity 0, so structural equality is group
    equality.
    """

    __slots__ = ("spec", "lamps", "shift", "_hash")

    def __init__(self, spec: LampGroupSpec, lamps: tuple[tuple[int, int], ...] = (), shift: int = 0):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "lamps", lamps)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "_hash", hash((lamps, shift)))

    def __setattr__(self, name, value):
        raise AttributeError("WreathElement is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WreathElement):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.shift == other.shift
            and self.lamps == other.lamps
            and (self.spec is other.spec or self.spec == other.spec)
        )

    def __repr__(self) -> str:
        body = " ".join(f"{p}:{self.spec.label(v)}" for p, v in self.lamps)
        return f"<{{{body}}} t^{self.shift}>"

    def __mul__(self, other: WreathElement) -> WreathElement:
        return multiply(self, other)

    @property
    def in_base(self) -> bool:
        return self.shift == 0

    @property
    def is_identity(self) -> bool:
        return self.shift == 0 and not self.lamps

    def lamp_dict(self) -> dict[int, int]:
        return dict(self.lamps)


def identity(spec: LampGroupSpec) -> WreathElement:
    return WreathElement(spec, (), 0)


def head(spec: LampGroupSpec, k: int = 1) -> WreathElement:
    """``t^k``."""
    return WreathElement(spec, (), k)


def lamp(spec: LampGroupSpec, position: int, value: int = 1) -> WreathElement:
    """Single lamp ``value`` at ``position``, shift 0."""
    return from_lamps(spec, {position: value})


def from_lamps(spec: LampGroupSpec, lamps: Mapping[int, int] | Iterable[tuple[int, int]], shift: int = 0) -> WreathElement:
    items = lamps.items() if isinstance(lamps, Mapping) else lamps
    norm = {}
    for p, v in items:
        v = _normalise(spec, v)
        if v != 0:
            norm[p] = v
    return WreathElement(spec, tuple(sorted(norm.items())), shift)


def _normalise(spec: LampGroupSpec, v: int) -> int:
    q = getattr(spec, "q", None)
    if q is not None:
        return v % q
    order = spec.order
    if order is not None and not 0 <= v < order:
        raise ValueError(f"lamp value {v} outside table range [0, {order})")
    return v


def _check(a: WreathElement, b: WreathElement) -> None:
    if a.spec is not b.spec and a.spec != b.spec:
        raise SpecMismatchError(f"lamp groups differ: {a.spec.ident} vs {b.spec.ident}")


def _combine(spec: LampGroupSpec, fa: tuple, fb: tuple, k: int) -> tuple[tuple[int, int], ...]:
    """Pointwise ``fa * shift_k(fb)`` as a canonical lamp tuple."""
    if not fb:
        return fa
    if not fa and k == 0:
        return fb
    mul = spec.mul
    out = []
    i = j = 0
    na, nb = len(fa), len(fb)
    while i < na and j < nb:
        pa, va = fa[i]
        pb = fb[j][0] + k
        if pa < pb:
            out.append(fa[i])
            i += 1
        elif pb < pa:
            out.append((pb, fb[j][1]))
            j += 1
        else:
            v = mul(va, fb[j][1])
            if v != 0:
                out.append((pa, v))
            i += 1
            j += 1
    if i < na:
        out.extend(fa[i:])
    while j < nb:
        out.append((fb[j][0] + k, fb[j][1]))
        j += 1
    return tuple(out)


def multiply(a: WreathElement, b: WreathElement) -> WreathElement:
    _check(a, b)
    return WreathElement(a.spec, _combine(a.spec, a.lamps, b.lamps, a.shift), a.shift + b.shift)


def inverse(a: WreathElement) -> WreathElement:
    inv = a.spec.inv
    k = a.shift
    return WreathElement(a.spec, tuple((p - k, inv(v)) for p, v in a.lamps), -k)


def conjugate(g: WreathElement, h: WreathElement) -> WreathElement:
    """``h^-1 g h``."""
    return multiply(multiply(inverse(h), g), h)


def commutes(a: WreathElement, b: WreathElement) -> bool:
    return multiply(a, b) == multiply(b, a)


def power(g: WreathElement, n: int) -> WreathElement:
    if n < 0:
        g, n = inverse(g), -n
    result = identity(g.spec)
    base = g
    while n:
        if n & 1:
            result = multiply(result, base)
        n >>= 1
        if n:
            base = multiply(base, base)
    return result


def support_extrema(g: WreathElement) -> tuple[int | None, int | None]:
    if not g.lamps:
        return None, None
    return g.lamps[0][0], g.lamps[-1][0]


def canonical_key(g: WreathElement) -> bytes:
    """Injective byte encoding: lamp-group id, shift, sorted entries."""
    body = ",".join(f"{p}:{v}" for p, v in g.lamps)
    return f"{g.spec.ident}|{g.shift}|{body}".encode()
