"""Closed-form counting bounds for base elements of C wr Z and F wr Z, and a
checker that instantiates each of them against exact ball counts.

Comparisons against sqrt(2)^n and the golden ratio power are made exactly,
with integer arithmetic on a + b*sqrt(d) forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .combinatorics import binom
from .geometry import Ball, base_stratification, build_ball, standard_genset
from .lamps import CyclicLamps, IntegerLamps, LampGroupSpec, TableLamps

__all__ = [
    "BoundProfile",
    "BoundRow",
    "fib_lucas",
    "le_four_sqrt2_pow",
    "le_four_phi_pow",
    "sqrt2_pow_le_phi_pow",
    "bound_base_C2",
    "bound_base_Cq_shell",
    "bound_FwrZ",
    "theorem1_chain_rows",
    "theorem2_chain_rows",
    "check_bounds_against_balls",
    "BoundCheckFailed",
]


class BoundCheckFailed(AssertionError):
    def __init__(self, rows: list[BoundRow]):
        super().__init__("bound check failed: " + "; ".join(f"{r.name} n={r.n}: {r.exact} vs {r.bound}" for r in rows))
        self.rows = rows


@dataclass
class BoundProfile:
    name: str
    n: int
    value: int
    bounds: str  # the ball quantity this bounds
    direction: str  # "upper" or "lower"
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


@dataclass
class BoundRow:
    name: str
    n: int
    exact: int
    bound: str
    passed: bool

    def as_dict(self) -> dict:
        return {"bound_name": self.name, "n": self.n, "exact_value": self.exact,
                "bound_value": self.bound, "pass": self.passed}


def fib_lucas(n: int) -> tuple[int, int]:
    """(F_n, L_n); phi^n = (L_n + F_n sqrt 5) / 2."""
    f0, f1 = 0, 1
    for _ in range(n):
        f0, f1 = f1, f0 + f1
    return f0, f0 + 2 * (f1 - f0)  # L_n = F_{n-1} + F_{n+1} = 2 F_{n+1} - F_n


def _le_root(x: int, b: int, d: int) -> bool:
    """x <= b * sqrt(d) for b >= 0."""
    return x <= 0 or x * x <= b * b * d


def le_four_sqrt2_pow(x: int, n: int) -> bool:
    """x <= 4 * sqrt(2)^n."""
    return x <= 0 or x * x <= 16 * 2**n


def le_four_phi_pow(x: int, n: int) -> bool:
    """x <= 4 * phi^n = 2 L_n + 2 F_n sqrt 5."""
    f, l = fib_lucas(n)
    return _le_root(x - 2 * l, 2 * f, 5)


def sqrt2_pow_le_phi_pow(n: int) -> bool:
    """sqrt(2)^n <= phi^n, i.e. 2^n <= phi^(2n) = (L_2n + F_2n sqrt 5) / 2."""
    f, l = fib_lucas(2 * n)
    return _le_root(2 ** (n + 1) - l, f, 5)


def _approx(expr: str, value: float) -> str:
    return f"{expr}~{value:.10g}"


def bound_base_C2(n: int) -> BoundProfile:
    """|B(n) cap A_0| in C_2 wr Z: at most 2^(j+1) lamp choices for each j <= n/2."""
    total = sum(2 ** (j + 1) for j in range(n // 2 + 1))
    phi = (1 + 5**0.5) / 2
    return BoundProfile(
        "T1.C2.sum", n, total, "|B(n) cap A_0|", "upper",
        extra={
            "four_sqrt2_pow": _approx(f"4*sqrt2^{n}", 4 * 2 ** (n / 2)),
            "four_phi_pow": _approx(f"4*phi^{n}", 4 * phi**n),
            "sum_le_sqrt2": le_four_sqrt2_pow(total, n),
            "sqrt2_le_phi": sqrt2_pow_le_phi_pow(n),
        },
    )


def bound_base_Cq_shell(n: int) -> BoundProfile:
    """|S(n) cap A_0| for |C| > 2 or C = Z, via weak compositions of n - 2k into 2k + 2 parts."""
    odd = sum(binom(n + 1, 2 * k + 1) for k in range(n // 2 + 1))
    return BoundProfile(
        "T1.Cq.shell_A0", n, odd, "|S(n) cap A_0|", "upper",
        extra={
            "stated": 2**n,
            "full_binomial_sum": sum(binom(n + 1, j) for j in range(n + 2)),
            "shell_A": (n + 1) * 2**n,
        },
    )


def bound_FwrZ(n: int, m: int) -> tuple[BoundProfile, BoundProfile]:
    """(lower bound on |B(n)|, upper bound on |S(n) cap A_0|) for F wr Z, |F| = m."""
    if n < 1 or m < 2:
        raise ValueError(f"need n >= 1 and m >= 2, got n={n}, m={m}")
    lower = BoundProfile("T2.lower", n, m ** -(-n // 2), "|B(n)|", "lower", {"m": m})
    inter = sum(binom(k + 1, n - 2 * k) * (m - 1) ** (n - 2 * k)
                for k in range((n - 1) // 3, n) if n - 2 * k >= 0)
    closed = (m - 1) ** 2 * m ** (n // 3)
    upper = BoundProfile("T2.shell_A0.sum", n, inter, "|S(n) cap A_0|", "upper", {"m": m},
                         extra={"closed": closed})
    return lower, upper


def theorem1_chain_rows(n_max: int = 40) -> list[BoundRow]:
    """The inequality chains used for C wr Z, checked exactly for n <= n_max."""
    rows = []
    for n in range(n_max + 1):
        p = bound_base_C2(n)
        rows.append(BoundRow("chain.C2.sum<=4sqrt2^n", n, p.value, p.extra["four_sqrt2_pow"], p.extra["sum_le_sqrt2"]))
        rows.append(BoundRow("chain.C2.4sqrt2^n<=4phi^n", n, p.value, p.extra["four_phi_pow"], p.extra["sqrt2_le_phi"]))
        q = bound_base_Cq_shell(n)
        rows.append(BoundRow("chain.Cq.odd_binomials==2^n", n, q.value, str(2**n), q.value == 2**n))
    return rows


def theorem2_chain_rows(n_max: int = 40, ms=(2, 3, 4, 6)) -> list[BoundRow]:
    """Each link of the F wr Z chain: sum over C(k+1, n-2k) <= sum over C(n, n-2k)
    <= (m-1)^2 * sum_{j <= n/3} C(n, j) (m-1)^j <= (m-1)^2 m^(n/3)."""
    rows = []
    for m in ms:
        for n in range(1, n_max + 1):
            ks = [k for k in range((n - 1) // 3, n) if n - 2 * k >= 0]
            s0 = sum(binom(k + 1, n - 2 * k) * (m - 1) ** (n - 2 * k) for k in ks)
            s1 = sum(binom(n, n - 2 * k) * (m - 1) ** (n - 2 * k) for k in ks)
            s2 = (m - 1) ** 2 * sum(binom(n, j) * (m - 1) ** j for j in range(n // 3 + 1))
            s3 = (m - 1) ** 2 * m ** (n // 3)
            tag = f"m={m}"
            rows.append(BoundRow(f"chain.T2.{tag}.link1", n, s0, str(s1), s0 <= s1))
            rows.append(BoundRow(f"chain.T2.{tag}.link2", n, s1, str(s2), s1 <= s2))
            rows.append(BoundRow(f"chain.T2.{tag}.link3", n, s2, str(s3), s2 <= s3))
            rows.append(BoundRow(f"chain.T2.{tag}.end_to_end", n, s0, str(s3), s0 <= s3))
    return rows


def _ball_rows(ball: Ball, n: int) -> list[BoundRow]:
    spec = ball.spec
    sub = ball.restrict(n)
    st = base_stratification(sub)
    rows = [BoundRow("strat.A<= (n+1)A_0", n, st.in_base, str((n + 1) * st.in_A0),
                     st.in_base <= (n + 1) * st.in_A0)]
    worst = max((st.by_min.get(s, 0) for s in range(-n, 0)), default=0)
    rows.append(BoundRow("strat.layer<=A_0", n, worst, str(st.in_A0), worst <= st.in_A0))
    edge = sum(c for s, c in st.by_min.items() if s <= -n)
    rows.append(BoundRow("strat.layer(s<=-n)==0", n, edge, "0", edge == 0) if n else
                BoundRow("strat.layer(s<=-n)==0", n, 0, "0", True))
    if isinstance(spec, CyclicLamps) and spec.q == 2:
        p = bound_base_C2(n)
        rows.append(BoundRow(p.name, n, st.in_A0, str(p.value), st.in_A0 <= p.value))
        rows.append(BoundRow("T1.C2.sqrt2", n, st.in_A0, p.extra["four_sqrt2_pow"], le_four_sqrt2_pow(st.in_A0, n)))
        rows.append(BoundRow("T1.C2.phi", n, st.in_A0, p.extra["four_phi_pow"], le_four_phi_pow(st.in_A0, n)))
    elif isinstance(spec, (CyclicLamps, IntegerLamps)):
        p = bound_base_Cq_shell(n)
        rows.append(BoundRow(p.name, n, st.shell_in_A0, str(p.value), st.shell_in_A0 <= p.value))
        rows.append(BoundRow("T1.Cq.shell_A0.stated", n, st.shell_in_A0, str(p.extra["stated"]),
                             st.shell_in_A0 <= p.extra["stated"]))
        rows.append(BoundRow("T1.Cq.shell_A", n, st.shell_in_base, str(p.extra["shell_A"]),
                             st.shell_in_base <= p.extra["shell_A"]))
        cumulative = sum((r + 1) * 2**r for r in range(n + 1))
        rows.append(BoundRow("T1.Cq.ball_A", n, st.in_base, str(cumulative), st.in_base <= cumulative))
    elif isinstance(spec, TableLamps):
        m = spec.table.order
        size = len(sub)
        shell = len(sub.shells[n])
        if n >= 1:
            lower, upper = bound_FwrZ(n, m)
            closed = upper.extra["closed"]
            rows += [
                BoundRow("T2.lower", n, size, str(lower.value), size >= lower.value),
                BoundRow("T2.lower.shell", n, shell, str(lower.value), shell >= lower.value),
                BoundRow("T2.shell_A0.sum", n, st.shell_in_A0, str(upper.value), st.shell_in_A0 <= upper.value),
                BoundRow("T2.shell_A0.closed", n, st.shell_in_A0, str(closed), st.shell_in_A0 <= closed),
                BoundRow("T2.shell_A.sum", n, st.shell_in_base, str((n + 1) * upper.value),
                         st.shell_in_base <= (n + 1) * upper.value),
                BoundRow("T2.shell_A.closed", n, st.shell_in_base, str((n + 1) * closed),
                         st.shell_in_base <= (n + 1) * closed),
            ]
    return rows


def check_bounds_against_balls(spec: LampGroupSpec, n_max: int, ball: Ball | None = None,
                               chain_n_max: int = 40, strict: bool = True) -> list[BoundRow]:
    """One row per (bound, n): exact ball quantity, bound value, pass/fail.

    The exact-arithmetic chains for C wr Z are appended for n <= chain_n_max.
    With ``strict`` any failing row raises :class:`BoundCheckFailed`.
    """
    if ball is None:
        ball = build_ball(spec, standard_genset(spec), n_max)
    rows = []
    for n in range(min(n_max, ball.radius) + 1):
        rows += _ball_rows(ball, n)
    if not isinstance(spec, TableLamps):
        rows += theorem1_chain_rows(chain_n_max)
    if strict:
        failed = [r for r in rows if not r.passed]
        if failed:
            raise BoundCheckFailed(failed)
    return rows
