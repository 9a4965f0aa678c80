"""Reversed-martingale analysis.

Covers the feasibility test for a single ``mu(t) M_k``, the two-term
combination ``mu_1 M_1 + mu_2 M_2`` with its five-way classification, the
cumulant closure forced by that combination (a recursion and an independent
ODE power-series solver), tangent numbers, and floating evaluators of the
closed-form moment generating functions.

Notation: ``chi_i = c_i / c_2`` and ``v = chi_4 - chi_3**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .cumulants import CumulantSpec
from .errors import DegenerateSpecError, DomainError, InvalidArgumentError, TruncationError
from .martingales import cross_moment
from .moments import IdentityReport, MomentTable, moments
from .ratpoly import MultiPoly, format_rational, parse_rational

T = ("t",)
ST = ("s", "t")


# ---------------------------------------------------------------------------
# exact rational-function helpers


def is_constant_ratio(num: MultiPoly, den: MultiPoly) -> bool:
    """True when ``num(t)/den(t)`` does not depend on t.

    Tested by the cross polynomial ``N(t) D(s) - N(s) D(t)``, which vanishes
    identically exactly when the ratio is constant.
    """
    if den.is_zero():
        raise DegenerateSpecError("denominator vanishes identically")
    s, t = MultiPoly.gens(ST)
    n_t, d_t = num.substitute({"t": t}), den.substitute({"t": t})
    n_s, d_s = num.substitute({"t": s}), den.substitute({"t": s})
    return (n_t * d_s - n_s * d_t).is_zero()


def constant_ratio_value(num: MultiPoly, den: MultiPoly) -> Optional[Fraction]:
    if not is_constant_ratio(num, den):
        return None
    d = den.degree("t")
    return num.coefficient("t", d).constant_value() / den.coefficient("t", d).constant_value()


@dataclass(frozen=True)
class RationalFunction:
    num: MultiPoly
    den: MultiPoly

    def __call__(self, t) -> Fraction:
        d = self.den.evaluate({"t": t})
        if d == 0:
            raise DomainError(f"pole at t = {t}")
        return self.num.evaluate({"t": t}) / d

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}


# ---------------------------------------------------------------------------
# single-index feasibility


@dataclass
class ReversedVerdict:
    k: int
    feasible: bool
    forced_zero_cumulants: List[int]
    witness: Optional[int]
    mu: RationalFunction
    constancy: Dict[int, bool] = field(default_factory=dict)
    mu_matches_gaussian: Optional[bool] = None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "feasible": self.feasible,
            "forced_zero_cumulants": self.forced_zero_cumulants,
            "witness": self.witness,
            "mu": self.mu.to_json(),
            "constancy": {str(l): ok for l, ok in self.constancy.items()},
            "mu_matches_gaussian": self.mu_matches_gaussian,
        }


def reversed_feasibility(spec: CumulantSpec, k: int, max_l: Optional[int] = None) -> ReversedVerdict:
    """Can ``mu(t) M_k(X_t, t)`` be a reversed martingale?

    Necessary condition: ``E[M_l M_k] / E[M_k**2]`` is constant in t for
    every l.  All l with ``k + l <= spec.order`` are tested (or up to
    ``max_l``).  For k >= 3 the cumulants ``c_max(3,k-1) .. c_(2k-1)`` are
    forced to vanish; that range always holds an even index >= 4, and a
    vanishing even cumulant of order >= 4 kills every c_i with i >= 3.
    """
    if k < 2:
        raise InvalidArgumentError("k must be >= 2")
    if 2 * k > spec.order:
        raise TruncationError(f"k = {k} needs c_1..c_{2 * k}; spec has order {spec.order}")
    diag = cross_moment(spec, k, k).poly
    if diag.is_zero():
        raise DegenerateSpecError("E[M_k^2] vanishes identically")
    mu = RationalFunction(MultiPoly.constant(T, 1), diag)
    top = spec.order - k if max_l is None else min(max_l, spec.order - k)
    constancy = {}
    for l in range(1, top + 1):
        if l == k:
            continue
        constancy[l] = is_constant_ratio(cross_moment(spec, l, k).poly, diag)

    lo, hi = max(3, k - 1), 2 * k - 1
    forced = list(range(lo, hi + 1))
    witness = next((i for i in forced if spec.c(i) != 0), None)
    if witness is None and k >= 3:
        witness = next((i for i in range(3, spec.order + 1) if spec.c(i) != 0), None)
    feasible = all(constancy.values()) and witness is None

    gaussian_mu = None
    if all(spec.c(i) == 0 for i in range(3, spec.order + 1)):
        want = MultiPoly.univariate("t", [0] * k + [factorial(k) * spec.c(2) ** k])
        gaussian_mu = diag == want
    return ReversedVerdict(k, feasible, forced, witness, mu, constancy, gaussian_mu)


# ---------------------------------------------------------------------------
# two-term combination


def mu_functions(c2, c3, c4, beta) -> Tuple[RationalFunction, RationalFunction]:
    """``(mu_1, mu_2)`` for the combination ``mu_1 M_1 + mu_2 M_2``."""
    c2, c3, c4, beta = (parse_rational(v) for v in (c2, c3, c4, beta))
    den = MultiPoly.univariate("t", [0, c2 * c4 - c3 ** 2, 2 * c2 ** 3])
    if den.is_zero():
        raise DegenerateSpecError("2 c2^3 t + c2 c4 - c3^2 vanishes identically")
    mu2 = MultiPoly.univariate("t", [c2 - beta * c3])
    mu1 = MultiPoly.univariate("t", [beta * c4 - c3, 2 * beta * c2 ** 2])
    return RationalFunction(mu1, den), RationalFunction(mu2, den)


def combination_constancy(spec: CumulantSpec, beta, lmax: int) -> Dict[int, Optional[Fraction]]:
    """``mu_1 E[M_1 M_l] + mu_2 E[M_2 M_l]`` for l = 1..lmax: its constant value or None."""
    mu1, mu2 = mu_functions(spec.c(2), spec.c(3), spec.c(4), beta)
    out = {}
    for l in range(1, lmax + 1):
        num = mu1.num * cross_moment(spec, 1, l).poly + mu2.num * cross_moment(spec, 2, l).poly
        out[l] = constant_ratio_value(num, mu1.den)
    return out


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


@dataclass(frozen=True)
class CombinationCase:
    """Classification of ``(c_2, c_3, c_4)`` with the derived scale constants.

    ``case_id`` follows the conditions under which the closure ODE has each
    solution type.  ``printed_case`` applies the published inequalities
    instead; the two disagree on some inputs (see the discrepancy report).
    """

    case_id: int
    printed_case: int
    c1: Fraction
    c2: Fraction
    c3: Fraction
    c4: Fraction
    alpha_squared: Optional[Fraction]  # scale^2 for cases 1, 4, 5
    alpha_exact: Optional[Fraction]

    @property
    def chi3(self) -> Fraction:
        return self.c3 / self.c2

    @property
    def chi4(self) -> Fraction:
        return self.c4 / self.c2

    @property
    def v(self) -> Fraction:
        return self.chi4 - self.chi3 ** 2

    @property
    def alpha(self) -> Optional[float]:
        return None if self.alpha_squared is None else math.sqrt(self.alpha_squared)

    @property
    def atom(self) -> Optional[Fraction]:
        return self.chi3 if self.case_id == 2 else None

    def to_json(self) -> dict:
        out = {
            "case": self.case_id,
            "printed_case": self.printed_case,
            "c": [format_rational(v) for v in (self.c1, self.c2, self.c3, self.c4)],
            "v": format_rational(self.v),
        }
        if self.case_id == 2:
            out["atom"] = format_rational(self.chi3)
        if self.alpha_squared is not None:
            out["alpha_squared"] = format_rational(self.alpha_squared)
            out["alpha"] = format_rational(self.alpha_exact) if self.alpha_exact is not None else self.alpha
        return out


def _printed_case(c2: Fraction, c3: Fraction, c4: Fraction) -> int:
    if c3 == 0 and c4 != 0:
        return 1
    if c4 * c2 == c3 ** 2:
        return 2
    if 2 * c4 * c2 == c3 ** 2:
        return 3
    return 4 if 2 * c4 * c2 > c3 ** 2 else 5


def classify_combination(c2, c3, c4, c1=0) -> CombinationCase:
    """Classify by the solution type of ``psi'' = chi_3 psi' + v psi psi'``.

    Exact equalities come first: v = 0 gives the single-atom case (which
    includes the pure Gaussian c3 = c4 = 0), then c3 = 0, then
    ``2v = chi_3**2``; the sign of ``2v - chi_3**2`` splits the rest.
    """
    c1, c2, c3, c4 = (parse_rational(v) for v in (c1, c2, c3, c4))
    if c2 <= 0:
        raise InvalidArgumentError("c2 must be positive")
    chi3, chi4 = c3 / c2, c4 / c2
    v = chi4 - chi3 ** 2
    gap = 2 * v - chi3 ** 2
    alpha_sq = None
    if v == 0:
        case = 2
    elif c3 == 0:
        case = 1 if v > 0 else 5
        alpha_sq = abs(chi4) / 2
    elif gap == 0:
        case = 3
    else:
        case = 4 if gap > 0 else 5
        alpha_sq = abs(gap) / 4
    exact = _rational_sqrt(alpha_sq) if alpha_sq is not None else None
    return CombinationCase(case, _printed_case(c2, c3, c4), c1, c2, c3, c4, alpha_sq, exact)


# ---------------------------------------------------------------------------
# cumulant closure and its ODE oracle


def _check_closure_args(c2, c3, c4, N: int) -> Tuple[Fraction, Fraction, Fraction]:
    c2, c3, c4 = (parse_rational(v) for v in (c2, c3, c4))
    if c2 <= 0:
        raise InvalidArgumentError("c2 must be positive")
    if N < 4:
        raise InvalidArgumentError("N must be >= 4")
    return c2, c3, c4


def cumulant_closure(c2, c3, c4, N: int, c1=0) -> CumulantSpec:
    """All cumulants up to c_N forced by ``(c_2, c_3, c_4)``.

    ``chi_{l+2} = chi_3 chi_{l+1} + (v/2) sum_{k=1}^{l-1} C(l,k) chi_{k+1} chi_{l+1-k}``.
    """
    c2, c3, c4 = _check_closure_args(c2, c3, c4, N)
    chi = {2: Fraction(1), 3: c3 / c2, 4: c4 / c2}
    half_v = (chi[4] - chi[3] ** 2) / 2
    for l in range(3, N - 1):
        s = sum((comb(l, k) * chi[k + 1] * chi[l + 1 - k] for k in range(1, l)), Fraction(0))
        chi[l + 2] = chi[3] * chi[l + 1] + half_v * s
    return CumulantSpec([parse_rational(c1)] + [c2 * chi[i] for i in range(2, N + 1)])


def ode_series(c2, c3, c4, N: int, c1=0) -> CumulantSpec:
    """Solve ``psi'' - chi_3 psi' - v psi psi' = 0``, psi(0)=0, psi'(0)=1, as a power series.

    Uses ordinary (not exponential) coefficients ``psi = sum p_k r^k`` and
    reads ``chi_{k+1} = k! p_k``; an independent route to the closure.
    """
    c2, c3, c4 = _check_closure_args(c2, c3, c4, N)
    chi3 = c3 / c2
    v = c4 / c2 - chi3 ** 2
    p = [Fraction(0), Fraction(1)]
    for k in range(0, N - 2):
        # [r^k] of psi * psi'
        pp = sum((p[i] * (k - i + 1) * p[k - i + 1] for i in range(1, k + 1)), Fraction(0))
        p.append((chi3 * (k + 1) * p[k + 1] + v * pp) / ((k + 2) * (k + 1)))
    chi = [factorial(k) * p[k] for k in range(len(p))]  # chi[k] = chi_{k+1}
    return CumulantSpec([parse_rational(c1)] + [c2 * chi[i - 1] for i in range(2, N + 1)])


# ---------------------------------------------------------------------------
# tangent numbers


@dataclass(frozen=True)
class TangentTable:
    T: tuple  # T[0] is T_1

    def __getitem__(self, j: int) -> int:
        if j < 1:
            raise IndexError(j)
        return self.T[j - 1]

    def to_json(self) -> list:
        return list(self.T)


def tangent_recursion(kmax: int, printed_index: bool = False) -> List[int]:
    """``T_{k+1} = sum_{s=1}^{k} C(2k, 2s-1) T_s T_{k-s+1}``.

    ``printed_index=True`` uses ``C(2k, 2k-1)`` in place of ``C(2k, 2s-1)``;
    kept for the discrepancy report.
    """
    if kmax < 1:
        raise InvalidArgumentError("kmax must be >= 1")
    T = [1]
    for k in range(1, kmax):
        acc = 0
        for s in range(1, k + 1):
            b = comb(2 * k, 2 * k - 1) if printed_index else comb(2 * k, 2 * s - 1)
            acc += b * T[s - 1] * T[k - s]
        T.append(acc)
    return T


def tangent_via_closure(kmax: int) -> List[int]:
    spec = cumulant_closure(1, 0, 2, 2 * kmax)
    out = []
    for j in range(1, kmax + 1):
        v = spec.c(2 * j)
        if v.denominator != 1:
            raise AssertionError(f"non-integer closure value at index {2 * j}")
        out.append(int(v))
    return out


def tangent_numbers(kmax: int) -> TangentTable:
    T = tangent_recursion(kmax)
    if T != tangent_via_closure(kmax):
        raise AssertionError("tangent recursion disagrees with the cumulant closure")
    return TangentTable(tuple(T))


# ---------------------------------------------------------------------------
# closed-form moment generating functions


def _series_terms(case: CombinationCase, n_terms: int) -> List[Fraction]:
    spec = cumulant_closure(case.c2, case.c3, case.c4, n_terms, c1=case.c1)
    return [spec.c(k) / factorial(k) for k in range(1, n_terms + 1)]


class SeriesMGF:
    """``exp(t f(x))`` from a long truncation of the closure series."""

    def __init__(self, case: CombinationCase, n_terms: int = 60):
        self.case = case
        self.coeffs = [float(c) for c in _series_terms(case, n_terms)]

    def exponent(self, x: float) -> float:
        return math.fsum(c * x ** (k + 1) for k, c in enumerate(self.coeffs))

    def __call__(self, x: float, t: float) -> float:
        return math.exp(t * self.exponent(x))


def series_radius(case: CombinationCase) -> float:
    """Radius of convergence of ``f`` around 0."""
    chi3 = float(case.chi3)
    if case.case_id == 2:
        return math.inf
    if case.case_id == 3:
        return 2 / abs(chi3)
    a = case.alpha
    if case.case_id == 1:
        return math.pi / (2 * a)
    k = chi3 / (2 * a)
    if case.case_id == 4:
        return math.atan(1 / abs(k)) / a
    if abs(k) > 1:
        return abs(math.atanh(1 / k)) / a
    return math.hypot(math.atanh(k), math.pi / 2) / a


def real_domain(case: CombinationCase) -> Tuple[float, float]:
    """Open interval around 0 on which the closed form is finite."""
    chi3 = float(case.chi3)
    if case.case_id == 2:
        return (-math.inf, math.inf)
    if case.case_id == 3:
        edge = 2 / chi3
        return (-math.inf, edge) if chi3 > 0 else (edge, math.inf)
    a = case.alpha
    if case.case_id == 1:
        return (-math.pi / (2 * a), math.pi / (2 * a))
    k = chi3 / (2 * a)
    if case.case_id == 4:
        # zeros of cos(a x) - k sin(a x): a x = arccot(k) + n pi
        acot = math.pi / 2 - math.atan(k)
        return ((acot - math.pi) / a, acot / a)
    if k > 1:
        return (-math.inf, math.atanh(1 / k) / a)
    if k < -1:
        return (math.atanh(1 / k) / a, math.inf)
    return (-math.inf, math.inf)


def _check_domain(case: CombinationCase, x: float) -> None:
    lo, hi = real_domain(case)
    if not lo < x < hi:
        raise DomainError(f"x = {x} outside ({lo}, {hi}) for case {case.case_id}")


def closed_form_exponent(case: CombinationCase, x: float) -> float:
    """``f(x)`` in closed form, integrated from the ODE solution of each case."""
    _check_domain(case, x)
    c1, c2 = float(case.c1), float(case.c2)
    chi3, v = float(case.chi3), float(case.v)
    cid = case.case_id
    if cid == 2:
        if chi3 == 0:
            return c1 * x + c2 * x * x / 2
        return c1 * x + c2 * math.expm1(chi3 * x) / chi3 ** 2 - c2 * x / chi3
    if cid == 3:
        return c1 * x - 2 * c2 * x / chi3 - (4 * c2 / chi3 ** 2) * math.log1p(-chi3 * x / 2)
    a = case.alpha
    k = chi3 / (2 * a)
    if cid == 4 or (cid == 1 and v > 0):
        g = math.cos(a * x) - k * math.sin(a * x)
    else:
        g = math.cosh(a * x) - k * math.sinh(a * x)
    return c1 * x - c2 * chi3 * x / v - (2 * c2 / v) * math.log(g)


def closed_form_eval(case: CombinationCase, x: float, t: float) -> float:
    """``E exp(x X_t)`` from the closed form."""
    return math.exp(t * closed_form_exponent(case, x))


def printed_closed_form_eval(case: CombinationCase, x: float, t: float) -> Optional[float]:
    """The published closed forms, unmodified; None where none is given.

    Evaluated only so their disagreement with the series can be measured.
    """
    c1, c2, c3, c4 = (float(v) for v in (case.c1, case.c2, case.c3, case.c4))
    chi3 = c3 / c2
    if case.printed_case == 1:
        return math.exp(c1 * t * x) * math.cos(x * math.sqrt(c4 / (2 * c2))) ** (-2 * t * c2 ** 2 / c4)
    if case.printed_case == 2:
        return None
    if case.printed_case == 3:
        return math.exp((c1 - 2 * c3 / c2) * t * x) * (1 / (1 - c3 * x / (2 * c2))) ** (4 * t * c3 ** 2 / c2 ** 2)
    a_sq = (2 * c4 / c2 - 3 * chi3 ** 2) / 4
    a = math.sqrt(abs(a_sq))
    if a == 0:  # displayed form divides by alpha
        return None
    k = chi3 / (2 * a)
    drift = math.exp(x * t * (c1 - c3 * c2 / (c4 * c2 - c3 ** 2)))
    if case.printed_case == 4:
        tn, cs = math.tan(x * a), math.cos(2 * x * a)
    else:
        tn, cs = math.tanh(x * a), math.cosh(2 * x * a)
    base = (1 + k * tn) / (1 - k * tn) / (2 * a * a - chi3 ** 2 / 2 + (2 * a * a + chi3 ** 2 / 2) * cs)
    power = 2 * t / (4 * a * a - chi3 ** 2)
    val = complex(base) ** power
    return drift * val.real if abs(val.imag) < 1e-12 * max(1.0, abs(val)) else math.nan


@dataclass
class ClosedFormValidation:
    case: CombinationCase
    points: List[float]
    t: float
    derived_max_rel_error: float
    printed_max_rel_error: Optional[float]
    tolerance: float = 1e-8

    @property
    def derived_ok(self) -> bool:
        return self.derived_max_rel_error <= self.tolerance

    @property
    def printed_ok(self) -> Optional[bool]:
        if self.printed_max_rel_error is None:
            return None
        return self.printed_max_rel_error <= self.tolerance

    @property
    def discrepancy(self) -> bool:
        return not self.derived_ok or self.printed_ok is False

    def to_json(self) -> dict:
        def clean(v):
            return None if v is None or math.isnan(v) else v

        return {
            "case": self.case.to_json(),
            "t": self.t,
            "points": self.points,
            "tolerance": self.tolerance,
            "derived_max_rel_error": self.derived_max_rel_error,
            "derived_ok": self.derived_ok,
            "printed_max_rel_error": clean(self.printed_max_rel_error),
            "printed_ok": self.printed_ok,
            "discrepancy": self.discrepancy,
            "authoritative": "series",
        }


def validate_closed_form(case: CombinationCase, t: float = 1.0, n_points: int = 9, n_terms: int = 60,
                         tolerance: float = 1e-8) -> ClosedFormValidation:
    """Compare closed forms against ``exp(t f_series(x))`` on ``|x| <= R/4``."""
    lo, hi = real_domain(case)
    r = min(series_radius(case), hi, -lo)
    r = 1.0 if math.isinf(r) else r
    step = r / 4
    pts = [step * (2 * i / (n_points - 1) - 1) for i in range(n_points)]
    series = SeriesMGF(case, n_terms)

    def rel(a: float, b: float) -> float:
        if a is None or math.isnan(a):
            return math.inf
        return abs(a - b) / max(abs(b), 1e-300)

    d_err, p_err = 0.0, None
    for x in pts:
        ref = series(x, t)
        d_err = max(d_err, rel(closed_form_eval(case, x, t), ref))
        try:
            pv = printed_closed_form_eval(case, x, t)
        except (ValueError, ZeroDivisionError, OverflowError):
            pv = math.nan
        if case.printed_case != 2:
            p_err = max(p_err or 0.0, rel(pv, ref))
    return ClosedFormValidation(case, pts, t, d_err, p_err, tolerance)


# ---------------------------------------------------------------------------
# symmetric case density


def symmetric_density(c2: float, c4: float, y: float) -> float:
    """Density of ``X_t`` at ``t = c4 / (2 c2^2)`` in the c3 = 0 case (c1 = 0)."""
    return math.sqrt(c4) / (math.sqrt(8 * c2) * math.cosh(math.pi * y * math.sqrt(2 * c2) / (2 * math.sqrt(c4))))


@dataclass
class DensityMomentCheck:
    t: Fraction
    orders: List[int]
    quadrature: List[float]
    exact: List[Fraction]
    max_rel_error: float

    def to_json(self) -> dict:
        return {
            "t": format_rational(self.t),
            "orders": self.orders,
            "quadrature": self.quadrature,
            "exact": [format_rational(v) for v in self.exact],
            "max_rel_error": self.max_rel_error,
        }


def density_moment_check(c2, c4, orders: Sequence[int] = (2, 4, 6), cutoff: float = 40.0) -> DensityMomentCheck:
    """Quadrature moments of the symmetric-case density vs the moment engine."""
    from scipy.integrate import quad

    c2, c4 = parse_rational(c2), parse_rational(c4)
    t = c4 / (2 * c2 ** 2)
    nmax = max(orders)
    table = moments(cumulant_closure(c2, 0, c4, max(nmax, 4)), nmax)
    exact = [table[n].evaluate({"t": t}) for n in orders]
    f2, f4 = float(c2), float(c4)
    quads = []
    for n in orders:
        # integrand is even for even n
        val, _ = quad(lambda y: y ** n * symmetric_density(f2, f4, y), 0, cutoff, limit=200, epsabs=0, epsrel=1e-12)
        quads.append(2 * val)
    err = max(abs(q - float(e)) / abs(float(e)) for q, e in zip(quads, exact))
    return DensityMomentCheck(t, list(orders), quads, exact, err)


# ---------------------------------------------------------------------------
# exact checks of the reversed-martingale and harness properties of M_1


def _joint_expectation(table: MomentTable, times: Sequence[str], powers: Sequence[int]) -> MultiPoly:
    """``E prod X_{times[i]}**powers[i]`` as a polynomial in the time variables.

    Times are taken increasing; ``X_{t_i}`` is written as a sum of
    independent increments.
    """
    inc_vars = tuple(f"i{j}" for j in range(len(times)))
    gens = MultiPoly.gens(inc_vars)
    prod = MultiPoly.constant(inc_vars, 1)
    partial = MultiPoly.zero(inc_vars)
    for g, p in zip(gens, powers):
        partial = partial + g
        prod = prod * partial ** p
    tvars = tuple(times)
    tg = dict(zip(tvars, MultiPoly.gens(tvars)))
    lengths = [tg[times[0]]] + [tg[times[j]] - tg[times[j - 1]] for j in range(1, len(times))]
    cache: Dict[Tuple[int, int], MultiPoly] = {}
    out = MultiPoly.zero(tvars)
    for e, c in prod.items():
        term = MultiPoly.constant(tvars, c)
        for j, a in enumerate(e):
            if a:
                if (j, a) not in cache:
                    cache[(j, a)] = table[a].substitute({"t": lengths[j]})
                term = term * cache[(j, a)]
        out = out + term
    return out


def check_reversed_m1(spec: CumulantSpec, jmax: int = 4) -> IdentityReport:
    """``E[(t M_1(X_s,s) - s M_1(X_t,t)) X_t^j] = 0`` for j <= jmax (s < t)."""
    table = moments(spec, jmax + 1)
    s, t = MultiPoly.gens(ST)
    c1 = spec.c(1)
    rep = IdentityReport("reversed_m1")
    for j in range(jmax + 1):
        e_s = _joint_expectation(table, ST, (1, j)) - s * c1 * _joint_expectation(table, ST, (0, j))
        e_t = _joint_expectation(table, ST, (0, j + 1)) - t * c1 * _joint_expectation(table, ST, (0, j))
        rep.record(j, t * e_s - s * e_t)
    return rep


def check_harness_m1(spec: CumulantSpec, degree: int = 2) -> IdentityReport:
    """Harness identity tested against ``X_s^a X_u^b`` for a + b <= degree."""
    stu = ("s", "t", "u")
    table = moments(spec, degree + 1)
    s, t, u = MultiPoly.gens(stu)
    c1 = spec.c(1)
    rep = IdentityReport("harness_m1")
    key = 0
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            def em1(which: int, var: MultiPoly) -> MultiPoly:
                pw = [a, 0, b]
                base = _joint_expectation(table, stu, pw)
                pw[which] += 1
                return _joint_expectation(table, stu, pw) - var * c1 * base

            resid = (u - s) * em1(1, t) - (u - t) * em1(0, s) - (t - s) * em1(2, u)
            rep.record(key, resid)
            key += 1
    return rep
