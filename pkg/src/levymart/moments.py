"""Moment polynomials ``m_n(t) = E X_t**n`` and the identities they satisfy.

Everything is exact.  Moments come from the recursion
``m_{n+1}(t) = t * sum_j C(n, j) c_{j+1} m_{n-j}(t)`` and every table is
cross-checked against the differential identity
``m_n'(t) = sum_{j>=1} C(n, j) c_j m_{n-j}(t)`` before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence

from .cumulants import CumulantSpec
from .errors import InvalidArgumentError, LevyMartError, TruncationError
from .ratpoly import MultiPoly, format_rational
from .series import TruncatedSeries

T = ("t",)


def tpoly(coeffs: Sequence) -> MultiPoly:
    return MultiPoly.univariate("t", coeffs)


def _zero(variables=T) -> MultiPoly:
    return MultiPoly.zero(variables)


def _one(variables=T) -> MultiPoly:
    return MultiPoly.constant(variables, 1)


@dataclass(frozen=True)
class MomentTable:
    spec: CumulantSpec
    m: tuple  # MultiPoly in ("t",), index 0..N

    @property
    def order(self) -> int:
        return len(self.m) - 1

    def __getitem__(self, n: int) -> MultiPoly:
        if n > self.order:
            raise TruncationError(f"m_{n} requested from a table of order {self.order}")
        return self.m[n]

    def at(self, t) -> List[Fraction]:
        """Numeric moments ``m_n(t)`` for rational ``t``."""
        return [p.evaluate({"t": t}) for p in self.m]

    def to_json(self) -> list:
        return [{"n": n, "poly": p.to_json()} for n, p in enumerate(self.m)]


@dataclass
class IdentityReport:
    """Outcome of an exact identity check; failures carry residual polynomials."""

    name: str
    checked: List[int] = field(default_factory=list)
    failures: Dict[int, MultiPoly] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, key: int, residual: MultiPoly) -> None:
        self.checked.append(key)
        if not residual.is_zero():
            self.failures[key] = residual

    def to_json(self) -> dict:
        out = {
            "identity": self.name,
            "pass": self.passed,
            "checked": list(self.checked),
            "failures": {str(k): v.to_json() for k, v in self.failures.items()},
        }
        if self.details:
            out["details"] = self.details
        return out


class IdentityViolation(LevyMartError):
    """A table failed its built-in self-check."""


def moment_polys(spec: CumulantSpec, N: int) -> List[MultiPoly]:
    """Raw recursion, no self-check (used by :func:`moments` and oracles)."""
    if N > spec.order:
        raise TruncationError(f"m_{N} needs c_1..c_{N}; spec has order {spec.order}")
    t = MultiPoly.var(T, "t")
    m = [_one()]
    for n in range(N):
        acc = _zero()
        for j in range(n + 1):
            c = spec.c(j + 1)
            if c:
                acc = acc + m[n - j] * (comb(n, j) * c)
        m.append(acc * t)
    return m


def derivative_residuals(spec: CumulantSpec, m: Sequence[MultiPoly]) -> Dict[int, MultiPoly]:
    out = {}
    for n in range(1, len(m)):
        rhs = _zero()
        for j in range(1, n + 1):
            c = spec.c(j)
            if c:
                rhs = rhs + m[n - j] * (comb(n, j) * c)
        out[n] = m[n].derivative("t") - rhs
    return out


def moments(spec: CumulantSpec, N: Optional[int] = None) -> MomentTable:
    N = spec.order if N is None else N
    m = moment_polys(spec, N)
    for n, res in derivative_residuals(spec, m).items():
        if not res.is_zero() or m[n].evaluate({"t": 0}) != 0:
            raise IdentityViolation(f"moment m_{n} fails the differential identity: {res}")
    return MomentTable(spec, tuple(m))


def check_time_derivative(table: MomentTable) -> IdentityReport:
    rep = IdentityReport("time_derivative")
    for n, res in derivative_residuals(table.spec, table.m).items():
        rep.record(n, res)
    return rep


def negative_time_moments(table: MomentTable, n: int) -> MultiPoly:
    return table[n].scale_var("t", -1)


def central_moments(spec: CumulantSpec, N: Optional[int] = None) -> List[MultiPoly]:
    """``E(X_t - c_1 t)**n`` two ways; they must agree exactly."""
    N = spec.order if N is None else N
    m = moment_polys(spec, N)
    shift = tpoly([0, -spec.c(1)])
    via_binomial = []
    for n in range(N + 1):
        acc = _zero()
        for i in range(n + 1):
            acc = acc + m[n - i] * shift ** i * comb(n, i)
        via_binomial.append(acc)
    via_zero_drift = moment_polys(spec.with_c1(0), N)
    if via_binomial != via_zero_drift:
        bad = next(n for n in range(N + 1) if via_binomial[n] != via_zero_drift[n])
        raise IdentityViolation(f"central moment routes disagree at n={bad}")
    return via_binomial


def _rename_t(p: MultiPoly, var: str, variables=("s", "t")) -> MultiPoly:
    """Move a polynomial in t into ``variables`` with t renamed to ``var``."""
    return p.substitute({"t": MultiPoly.var(variables, var)})


def check_convolution(spec: CumulantSpec, N: Optional[int] = None, table: Optional[MomentTable] = None) -> IdentityReport:
    """``m_n(s+t) = sum_j C(n,j) m_j(s) m_{n-j}(t)`` as polynomials in (s, t)."""
    table = table if table is not None else moments(spec, N)
    N = table.order if N is None else N
    st = ("s", "t")
    s_t = MultiPoly.var(st, "s") + MultiPoly.var(st, "t")
    in_s = [_rename_t(table[n], "s") for n in range(N + 1)]
    in_t = [table[n].lift(st) for n in range(N + 1)]
    rep = IdentityReport("convolution")
    for n in range(N + 1):
        lhs = table[n].substitute({"t": s_t})
        rhs = MultiPoly.zero(st)
        for j in range(n + 1):
            rhs = rhs + in_s[j] * in_t[n - j] * comb(n, j)
        rep.record(n, lhs - rhs)
    return rep


def check_shifted_moment_identity(spec: CumulantSpec, n: int, i: int, table: Optional[MomentTable] = None) -> IdentityReport:
    """``sum_j C(n,j) m_{n-j}(-s) m_{j+i}(s)`` against the series side.

    Right side: n-th u-derivative at 0 of ``exp(-s f(u)) * d^i/du^i exp(s f(u))``
    built with truncated series whose coefficients are polynomials in s.
    """
    if n + i > spec.order:
        raise TruncationError(f"identity needs c_1..c_{n + i}; spec has order {spec.order}")
    table = table if table is not None else moments(spec, n + i)
    S = ("s",)
    s = MultiPoly.var(S, "s")

    def in_s(p: MultiPoly) -> MultiPoly:
        return p.substitute({"t": s})

    lhs = MultiPoly.zero(S)
    for j in range(n + 1):
        lhs = lhs + in_s(table[n - j].scale_var("t", -1)) * in_s(table[j + i]) * comb(n, j)

    order = n + i
    f = TruncatedSeries([Fraction(0)] + [spec.c(k) / factorial(k) for k in range(1, order + 1)])
    sf = f.map(lambda c: s * c)
    e_plus = sf.exp()
    e_minus = (-sf).exp()
    d = e_plus
    for _ in range(i):
        d = d.derivative()
    prod = e_minus.truncate(d.order) * d
    rhs = prod.egf_coefficient(n)
    rep = IdentityReport(f"shifted_moment(n={n}, i={i})")
    rep.record(n, lhs - rhs)
    return rep


# ---------------------------------------------------------------------------
# Yablonski polynomials


def yablonski_polys(nmax: int, nvars: Optional[int] = None) -> List[MultiPoly]:
    """``P_n(x_1..x_n)`` from ``exp(sum_k (-1)^(k-1) x_k z^k / k) = sum_n P_n z^n``."""
    nvars = nmax if nvars is None else nvars
    names = tuple(f"x{k:02d}" for k in range(1, nvars + 1)) or ("x01",)
    gens = {v: MultiPoly.var(names, v) for v in names}
    zero = MultiPoly.zero(names)
    coeffs = [zero]
    for k in range(1, nmax + 1):
        coeffs.append(gens[names[k - 1]] * Fraction((-1) ** (k - 1), k))
    return TruncatedSeries(coeffs).exp().coeffs


def yablonski_args(spec: CumulantSpec, n: int, sign_convention: str = "moment") -> List[MultiPoly]:
    """Arguments ``x_k`` as polynomials in t.

    ``"moment"`` uses ``x_k = (-1)**(k-1) c_k t/(k-1)!``, which reproduces
    the moments; ``"reflected"`` uses ``(-1)**k c_k t/(k-1)!``, which yields
    ``m_n(-t)`` instead.
    """
    if sign_convention not in ("moment", "reflected"):
        raise InvalidArgumentError(f"unknown sign convention {sign_convention!r}")
    sgn = 0 if sign_convention == "moment" else 1
    return [tpoly([0, Fraction((-1) ** (k - 1 + sgn)) * spec.c(k) / factorial(k - 1)]) for k in range(1, n + 1)]


def moments_via_yablonski(spec: CumulantSpec, N: int, sign_convention: str = "moment") -> List[MultiPoly]:
    P = yablonski_polys(N)
    args = yablonski_args(spec, N, sign_convention)
    names = P[0].variables
    mapping = {names[k]: args[k] for k in range(N)}
    out = []
    for n in range(N + 1):
        if n == 0:
            out.append(_one())
            continue
        out.append(P[n].substitute(mapping) * factorial(n))
    return out


def yablonski_check(
    spec: CumulantSpec,
    N: int,
    partners: Sequence[CumulantSpec] = (),
    alphas: Sequence[Fraction] = (Fraction(1), Fraction(2), Fraction(-1, 3)),
) -> IdentityReport:
    """Moment representation, additivity against each partner spec, and scaling."""
    table = moments(spec, N)
    rep = IdentityReport("yablonski")
    via_p = moments_via_yablonski(spec, N)
    for n in range(N + 1):
        rep.record(n, via_p[n] - table[n])
    literal = moments_via_yablonski(spec, N, "reflected")
    rep.details["reflected_sign_matches_m"] = all(literal[n] == table[n] for n in range(N + 1))
    rep.details["reflected_sign_matches_m_negative_t"] = all(
        literal[n] == table[n].scale_var("t", -1) for n in range(N + 1)
    )
    key = 1000
    for d in partners:
        other = moments(d, N)
        joint = moments((spec + d), N)
        for n in range(N + 1):
            rhs = _zero()
            for k in range(n + 1):
                rhs = rhs + table[k] * other[n - k] * comb(n, k)
            rep.record(key + n, joint[n] - rhs)
        key += 1000
    for a in alphas:
        a = Fraction(a)
        scaled = moments(spec.scaled(a), N)
        for n in range(N + 1):
            rep.record(key + n, scaled[n] - table[n] * a ** n)
        key += 1000
    return rep


def cumulant_sensitivity(spec: CumulantSpec, n: int, l: int, table: Optional[MomentTable] = None) -> MultiPoly:
    """``d m_n / d c_l = C(n, l) t m_{n-l}(t)`` (zero when l > n)."""
    if n > spec.order:
        raise TruncationError(f"m_{n} needs c_1..c_{n}; spec has order {spec.order}")
    if l > n:
        return _zero()
    table = table if table is not None else moments(spec, n)
    return table[n - l] * tpoly([0, comb(n, l)])


def sensitivity_oracle(spec: CumulantSpec, n: int, l: int) -> MultiPoly:
    """Differentiate the moment recursion itself with respect to ``c_l``.

    ``D_{k+1} = t * sum_j C(k, j) (dc_{j+1} m_{k-j} + c_{j+1} D_{k-j})`` with
    ``dc_i = [i == l]``.  Independent of the closed form above.
    """
    m = moment_polys(spec, n)
    t = MultiPoly.var(T, "t")
    D = [_zero()]
    for k in range(n):
        acc = _zero()
        for j in range(k + 1):
            if j + 1 == l:
                acc = acc + m[k - j] * comb(k, j)
            c = spec.c(j + 1)
            if c:
                acc = acc + D[k - j] * (comb(k, j) * c)
        D.append(acc * t)
    return D[n]


def sensitivity_printed(spec: CumulantSpec, n: int, l: int) -> MultiPoly:
    """The displayed coefficient ``n t m_{n-l}``; kept for arbitration only."""
    if l > n:
        return _zero()
    return moment_polys(spec, n)[n - l] * tpoly([0, n])


def check_semigroup_at(table: MomentTable, a: Fraction, b: Fraction) -> bool:
    ma, mb, mab = table.at(a), table.at(b), table.at(a + b)
    return all(
        mab[n] == sum(comb(n, j) * ma[j] * mb[n - j] for j in range(n + 1))
        for n in range(table.order + 1)
    )


def table_json(table: MomentTable) -> dict:
    return {"cumulants": [format_rational(c) for c in table.spec.values], "moments": table.to_json()}
