"""Polynomial martingales ``M_n(x, t)`` and their second-order structure.

``M_n(x, t) = sum_j C(n, j) m_{n-j}(-t) x**j`` is monic of degree n in x and
``M_n(X_t, t)`` is a martingale.  Polynomials here live over the variable
list ``("t", "x")``; conditional expectations add ``"s"`` for the earlier
time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence

from .cumulants import CumulantSpec
from .errors import InvalidArgumentError, TruncationError
from .moments import IdentityReport, MomentTable, moments
from .ratpoly import MultiPoly, format_rational
from .series import TruncatedSeries

TX = ("t", "x")
STX = ("s", "t", "x")


def _t_only(p: MultiPoly) -> MultiPoly:
    return p.restrict(("t",))


@dataclass(frozen=True)
class MartingaleFamily:
    spec: CumulantSpec
    M: tuple  # MultiPoly over ("t", "x")

    @property
    def order(self) -> int:
        return len(self.M) - 1

    def __getitem__(self, n: int) -> MultiPoly:
        if n > self.order:
            raise TruncationError(f"M_{n} requested from a family of order {self.order}")
        return self.M[n]

    def to_json(self) -> list:
        return [{"n": n, "poly": p.to_json()} for n, p in enumerate(self.M)]


def _family_from_table(table: MomentTable, N: int) -> List[MultiPoly]:
    x = MultiPoly.var(TX, "x")
    neg = [table[k].scale_var("t", -1).lift(TX) for k in range(N + 1)]
    xs = [MultiPoly.constant(TX, 1)]
    for _ in range(N):
        xs.append(xs[-1] * x)
    out = []
    for n in range(N + 1):
        acc = MultiPoly.zero(TX)
        for j in range(n + 1):
            acc = acc + neg[n - j] * xs[j] * comb(n, j)
        out.append(acc)
    return out


def exponential_martingale_coeffs(spec: CumulantSpec, N: int) -> List[MultiPoly]:
    """``n! [r^n] exp(r x - t f(r))`` for n <= N."""
    if N > spec.order:
        raise TruncationError(f"needs c_1..c_{N}; spec has order {spec.order}")
    t = MultiPoly.var(TX, "t")
    x = MultiPoly.var(TX, "x")
    coeffs = [MultiPoly.zero(TX)]
    for k in range(1, N + 1):
        ck = t * (-spec.c(k) / factorial(k))
        coeffs.append(ck + x if k == 1 else ck)
    e = TruncatedSeries(coeffs).exp()
    return [e.egf_coefficient(n) for n in range(N + 1)]


def martingale_family(spec: CumulantSpec, N: Optional[int] = None, table: Optional[MomentTable] = None) -> MartingaleFamily:
    N = spec.order if N is None else N
    table = table if table is not None else moments(spec, N)
    M = _family_from_table(table, N)
    gen = exponential_martingale_coeffs(spec, N)
    for n in range(N + 1):
        if M[n] != gen[n]:
            raise AssertionError(f"M_{n} disagrees with the exponential-martingale coefficient")
    return MartingaleFamily(spec, tuple(M))


def martingale_poly(spec: CumulantSpec, n: int) -> MultiPoly:
    if n > spec.order:
        raise TruncationError(f"M_{n} needs c_1..c_{n}; spec has order {spec.order}")
    return martingale_family(spec, n)[n]


# ---------------------------------------------------------------------------
# expectations


def expectation(p: MultiPoly, table: MomentTable) -> MultiPoly:
    """``E p(X_t, t)`` as a polynomial in t, with ``p`` over ("t", "x")."""
    d = p.degree("x")
    if d > table.order:
        raise TruncationError(f"degree {d} in x exceeds moment order {table.order}")
    acc = MultiPoly.zero(("t",))
    for j in range(d + 1):
        a = p.coefficient("x", j)
        if a:
            acc = acc + _t_only(a) * table[j]
    return acc


def conditional_expectation(spec: CumulantSpec, p: MultiPoly, table: Optional[MomentTable] = None) -> MultiPoly:
    """``E(p(X_t, t) | X_s = x)`` over ("s", "t", "x"), t kept symbolic.

    Powers of ``X_t = (X_t - X_s) + x`` are expanded with the increment
    moments ``m_j(t - s)``.
    """
    d = p.degree("x")
    if d > spec.order:
        raise TruncationError(f"degree {d} in x exceeds cumulant order {spec.order}")
    table = table if table is not None else moments(spec, max(d, 0))
    s, t, x = MultiPoly.gens(STX)
    inc = [table[j].substitute({"t": t - s}) for j in range(d + 1)]
    xs = [MultiPoly.constant(STX, 1)]
    for _ in range(d):
        xs.append(xs[-1] * x)
    out = MultiPoly.zero(STX)
    for j in range(d + 1):
        a = p.coefficient("x", j)
        if not a:
            continue
        a = a.lift(STX)
        power = MultiPoly.zero(STX)
        for k in range(j + 1):
            power = power + xs[k] * inc[j - k] * comb(j, k)
        out = out + a * power
    return out


def at_earlier_time(p: MultiPoly) -> MultiPoly:
    """``p(x, s)`` over ("s", "t", "x")."""
    s, _, x = MultiPoly.gens(STX)
    return p.substitute({"t": s, "x": x})


def check_martingale_identity(spec: CumulantSpec, N: int, family: Optional[MartingaleFamily] = None) -> IdentityReport:
    family = family if family is not None else martingale_family(spec, N)
    table = moments(spec, N)
    rep = IdentityReport("martingale")
    for n in range(N + 1):
        ce = conditional_expectation(spec, family[n], table)
        rep.record(n, ce - at_earlier_time(family[n]))
    return rep


def check_mean_zero(spec: CumulantSpec, N: int, family: Optional[MartingaleFamily] = None) -> IdentityReport:
    family = family if family is not None else martingale_family(spec, N)
    table = moments(spec, N)
    rep = IdentityReport("mean_zero")
    for n in range(1, N + 1):
        rep.record(n, expectation(family[n], table))
    return rep


# ---------------------------------------------------------------------------
# expansions in the M basis


def m_basis_coefficients(p: MultiPoly, family: MartingaleFamily) -> Dict[int, MultiPoly]:
    """Back-substitution in the monic, triangular M basis (coefficients in t)."""
    d = p.degree("x")
    if d > family.order:
        raise TruncationError(f"degree {d} exceeds family order {family.order}")
    rem = p
    out: Dict[int, MultiPoly] = {}
    for j in range(d, -1, -1):
        lead = rem.coefficient("x", j)
        if lead:
            out[j] = _t_only(lead)
            rem = rem - family[j] * lead
    if rem:
        raise AssertionError("back-substitution left a remainder")
    return out


@dataclass
class Expansion:
    """``M_i * M_n = sum_j coeff_j(t) M_j`` from the closed form and directly."""

    left: int
    n: int
    formula: Dict[int, MultiPoly]
    direct: Dict[int, MultiPoly]
    expectation: MultiPoly

    @property
    def matches(self) -> bool:
        return self.formula == self.direct

    def to_json(self) -> dict:
        return {
            "left": self.left,
            "n": self.n,
            "matches": self.matches,
            "coefficients": {str(j): p.to_json() for j, p in sorted(self.formula.items())},
            "expectation": self.expectation.to_json(),
        }


def _add(d: Dict[int, MultiPoly], j: int, p: MultiPoly) -> None:
    q = d.get(j, MultiPoly.zero(("t",))) + p
    if q:
        d[j] = q
    else:
        d.pop(j, None)


def product_expand_M1(spec: CumulantSpec, n: int, family: Optional[MartingaleFamily] = None) -> Expansion:
    if n + 1 > spec.order:
        raise TruncationError(f"M_1 M_{n} needs c_1..c_{n + 1}; spec has order {spec.order}")
    family = family if family is not None else martingale_family(spec, n + 1)
    t = MultiPoly.var(("t",), "t")
    formula: Dict[int, MultiPoly] = {}
    _add(formula, n + 1, MultiPoly.constant(("t",), 1))
    for k in range(1, n + 1):
        _add(formula, n - k, t * (comb(n, k) * spec.c(k + 1)))
    direct = m_basis_coefficients(family[1] * family[n], family)
    return Expansion(1, n, formula, direct, formula.get(0, MultiPoly.zero(("t",))))


def product_expand_M2(spec: CumulantSpec, n: int, family: Optional[MartingaleFamily] = None) -> Expansion:
    if n + 2 > spec.order:
        raise TruncationError(f"M_2 M_{n} needs c_1..c_{n + 2}; spec has order {spec.order}")
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    family = family if family is not None else martingale_family(spec, n + 2)
    c = spec.c
    t = MultiPoly.var(("t",), "t")
    t2 = t * t
    formula: Dict[int, MultiPoly] = {}
    _add(formula, n + 2, MultiPoly.constant(("t",), 1))
    _add(formula, n, t * (2 * n * c(2)))
    for k in range(2, n + 2):
        _add(formula, n - k + 1, t * ((comb(n, k - 1) + 2 * comb(n, k)) * c(k + 1)))
    for l in range(2, n + 1):
        inner = sum((comb(l, k) * c(k + 1) * c(l - k + 1) for k in range(1, l)), Fraction(0))
        _add(formula, n - l, t2 * (comb(n, l) * inner))
    direct = m_basis_coefficients(family[2] * family[n], family)
    scalar = t * c(n + 2) + t2 * sum(
        (comb(n, k) * c(k + 1) * c(n + 1 - k) for k in range(1, n)), Fraction(0)
    )
    return Expansion(2, n, formula, direct, scalar)


# ---------------------------------------------------------------------------
# cross moments E[M_n M_k](t)


@dataclass(frozen=True)
class CrossMomentPoly:
    n: int
    k: int
    poly: MultiPoly  # in ("t",)
    d_coeffs: tuple  # d_j for j = 1..min(n, k)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d": [format_rational(d) for d in self.d_coeffs],
            "poly": self.poly.to_json(),
        }


def _box(p: MultiPoly, bounds: Sequence[int]) -> MultiPoly:
    return MultiPoly._raw(
        p.variables,
        {e: c for e, c in p.items() if all(a <= b for a, b in zip(e, bounds))},
    )


def cross_moment_coeffs(spec: CumulantSpec, n: int, k: int) -> List[Fraction]:
    """``d_j = n! k! [u^n v^k] g(u, v)**j / j!`` with ``g = f(u+v) - f(u) - f(v)``.

    This is the t**j coefficient of the mixed derivative of
    ``exp(t g(u, v))`` at the origin; ``c_1`` cancels inside ``g``.
    """
    need = n + k
    if need > spec.order:
        raise TruncationError(f"E[M_{n} M_{k}] needs c_1..c_{need}; spec has order {spec.order}")
    uv = ("u", "v")
    u, v = MultiPoly.gens(uv)
    bounds = (n, k)
    s = u + v
    g = MultiPoly.zero(uv)
    su, uu, vv = s, u, v
    for m in range(2, need + 1):
        su, uu, vv = su * s, uu * u, vv * v
        cm = spec.c(m)
        if cm:
            g = g + _box(su - uu - vv, bounds) * (cm / factorial(m))
    target = (n, k)
    out = []
    power = MultiPoly.constant(uv, 1)
    for j in range(1, min(n, k) + 1):
        power = _box(power * g, bounds)
        coef = power.terms.get(target, Fraction(0))
        out.append(coef * factorial(n) * factorial(k) / factorial(j))
    return out


def cross_moment(spec: CumulantSpec, n: int, k: int) -> CrossMomentPoly:
    d = cross_moment_coeffs(spec, n, k)
    poly = MultiPoly.univariate("t", [0] + d)
    return CrossMomentPoly(n, k, poly, tuple(d))


def cross_moment_oracle(spec: CumulantSpec, n: int, k: int, family: Optional[MartingaleFamily] = None,
                        table: Optional[MomentTable] = None) -> MultiPoly:
    """Expand ``M_n M_k`` in monomials of x and take moments term by term."""
    family = family if family is not None else martingale_family(spec, max(n, k))
    table = table if table is not None else moments(spec, n + k)
    return expectation(family[n] * family[k], table)


def cross_moment_printed(spec: CumulantSpec, n: int, k: int) -> List[Fraction]:
    """``d^{n+k-j}/dx^{n+k-j} h(x)**j`` at 0, ``h = f' - c_1``, as displayed.

    Retained only so the arbitration report can show where it departs from
    the generating function; do not use for computation.
    """
    need = n + k
    if need > spec.order:
        raise TruncationError(f"needs c_1..c_{need}")
    h = TruncatedSeries([Fraction(0)] + [spec.c(m + 1) / factorial(m) for m in range(1, need)])
    out = []
    power = TruncatedSeries([Fraction(1)] + [Fraction(0)] * h.order)
    for j in range(1, min(n, k) + 1):
        power = power * h
        out.append(power.egf_coefficient(need - j))
    return out


def check_hermite_recurrence(family: MartingaleFamily, nmax: int) -> IdentityReport:
    """Gaussian case: ``M_{n+1} = x M_n - n c_2 t M_{n-1}``."""
    c2 = family.spec.c(2)
    t, x = MultiPoly.gens(TX)
    rep = IdentityReport("hermite_recurrence")
    for n in range(1, nmax + 1):
        rep.record(n, family[n + 1] - x * family[n] + t * family[n - 1] * (n * c2))
    return rep
