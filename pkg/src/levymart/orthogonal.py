"""Monic orthogonal polynomials of the marginal law at a fixed rational time.

Polynomials in x are handled as coefficient lists (lowest degree first) with
Fraction entries; ``<p, q> = E p(X_t0) q(X_t0)`` is read off the moment
table.  Exposed polynomials are converted to :class:`MultiPoly` over ``("x",)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .cumulants import CumulantSpec
from .errors import InvalidArgumentError, TruncationError
from .martingales import cross_moment, martingale_family
from .moments import moments
from .ratpoly import MultiPoly, format_rational, parse_rational

Coeffs = List[Fraction]


def _mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Coeffs:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _axpy(p: Sequence[Fraction], a: Fraction, q: Sequence[Fraction]) -> Coeffs:
    """``p + a*q`` for coefficient lists."""
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += a * c
    return out


def _as_poly(p: Sequence[Fraction]) -> MultiPoly:
    return MultiPoly.univariate("x", list(p))


def _strip(p: Coeffs) -> Coeffs:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


@dataclass
class OrthogonalBasis:
    t0: Fraction
    Q: List[Coeffs]
    norms: List[Fraction]
    moments_at_t0: List[Fraction]
    degenerate_at: Optional[int] = None

    def inner(self, p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
        prod = _mul(p, q)
        if len(prod) > len(self.moments_at_t0):
            raise TruncationError("product degree exceeds available moments")
        return sum((c * self.moments_at_t0[k] for k, c in enumerate(prod) if c), Fraction(0))

    def poly(self, n: int) -> MultiPoly:
        return _as_poly(self.Q[n])

    @property
    def size(self) -> int:
        return len(self.Q)

    def to_json(self) -> dict:
        return {
            "t": format_rational(self.t0),
            "Q": [{"n": n, "poly": self.poly(n).to_json()} for n in range(self.size)],
            "norms": [format_rational(v) for v in self.norms],
            "degenerate_at": self.degenerate_at,
        }


def orthogonal_basis(spec: CumulantSpec, t0, nmax: int) -> OrthogonalBasis:
    """Classical Gram-Schmidt on 1, x, x^2, ... with exact moments at ``t0``.

    Stops early (``degenerate_at`` set) when a norm vanishes, which happens
    for finitely supported marginals.
    """
    t0 = parse_rational(t0)
    if t0 <= 0:
        raise InvalidArgumentError("t0 must be positive")
    if nmax < 0:
        raise InvalidArgumentError("nmax must be >= 0")
    if 2 * nmax > spec.order:
        raise TruncationError(f"degree {nmax} needs c_1..c_{2 * nmax}; spec has order {spec.order}")
    table = moments(spec, 2 * nmax)
    basis = OrthogonalBasis(t0, [], [], table.at(t0))
    for n in range(nmax + 1):
        q = [Fraction(0)] * n + [Fraction(1)]
        for j, prev in enumerate(basis.Q):
            coef = basis.inner(q, prev) / basis.norms[j]
            if coef:
                q = _axpy(q, -coef, prev)
        q = _strip(q)
        norm = basis.inner(q, q)
        if norm <= 0:
            basis.degenerate_at = n
            break
        basis.Q.append(q)
        basis.norms.append(norm)
    return basis


@dataclass
class RecurrenceCheck:
    a: List[Fraction]
    b: List[Fraction]
    ok: bool

    def to_json(self) -> dict:
        return {"a": [format_rational(v) for v in self.a], "b": [format_rational(v) for v in self.b], "pass": self.ok}


def three_term_recurrence(basis: OrthogonalBasis) -> RecurrenceCheck:
    """Recover ``Q_{n+1} = (x - a_n) Q_n - b_n Q_{n-1}`` and confirm it holds."""
    a: List[Fraction] = []
    b: List[Fraction] = []
    ok = True
    x = [Fraction(0), Fraction(1)]
    for n in range(basis.size - 1):
        xq = _mul(x, basis.Q[n])
        an = basis.inner(xq, basis.Q[n]) / basis.norms[n]
        bn = basis.norms[n] / basis.norms[n - 1] if n > 0 else Fraction(0)
        rhs = _axpy(xq, -an, basis.Q[n])
        if n > 0:
            rhs = _axpy(rhs, -bn, basis.Q[n - 1])
            ok = ok and bn > 0
        ok = ok and _strip(rhs) == basis.Q[n + 1]
        a.append(an)
        b.append(bn)
    return RecurrenceCheck(a, b, ok)


@dataclass
class ConnectionCoeffs:
    """``b_hat[n][j]``: M_n in the Q basis; ``b[n][j]``: Q_n in the M basis."""

    basis: OrthogonalBasis
    b: List[List[Fraction]]
    b_hat: List[List[Fraction]]
    checks: Dict[str, bool] = field(default_factory=dict)
    mismatches: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        tri = lambda m: [[format_rational(v) for v in row] for row in m]  # noqa: E731
        return {
            "basis": self.basis.to_json(),
            "b": tri(self.b),
            "b_hat": tri(self.b_hat),
            "checks": dict(self.checks),
            "mismatches": self.mismatches,
            "pass": self.passed,
        }


def _invert_unit_lower(m: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(m)
    inv = [[Fraction(0)] * (i + 1) for i in range(n)]
    for i in range(n):
        inv[i][i] = Fraction(1)
        for j in range(i - 1, -1, -1):
            inv[i][j] = -sum((m[i][k] * inv[k][j] for k in range(j, i)), Fraction(0))
    return inv


def second_coefficient_formula(spec: CumulantSpec, n: int, t0: Fraction) -> Optional[Fraction]:
    """Closed form of the Q_2 coefficient of M_n; None when Q_2 has zero norm."""
    c = spec.c
    den = 2 * t0 * c(2) ** 3 + c(2) * c(4) - c(3) ** 2
    if den == 0:
        return None
    s = sum((comb(n, k) * c(k + 1) * c(n + 1 - k) for k in range(1, n)), Fraction(0))
    return (t0 * c(2) * s + c(n + 2) * c(2) - c(3) * c(n + 1)) / den


def connection_coeffs(spec: CumulantSpec, t0, nmax: int) -> ConnectionCoeffs:
    t0 = parse_rational(t0)
    basis = orthogonal_basis(spec, t0, nmax)
    size = basis.size
    family = martingale_family(spec, 2 * nmax)
    M = [[family[n].evaluate({"t": t0}).coefficient("x", j).constant_value() or Fraction(0)
          for j in range(n + 1)] for n in range(size)]
    b_hat = [[basis.inner(M[n], basis.Q[j]) / basis.norms[j] for j in range(n + 1)] for n in range(size)]
    b = _invert_unit_lower(b_hat)

    out = ConnectionCoeffs(basis, b, b_hat)
    ident = all(
        sum((b[i][k] * b_hat[k][j] for k in range(j, i + 1)), Fraction(0)) == (1 if i == j else 0)
        for i in range(size) for j in range(i + 1)
    )
    out.checks["mutual_inverse"] = ident
    # reconstruct Q_n from b and M: independent of the projection
    recon = True
    for n in range(size):
        acc: Coeffs = [Fraction(0)]
        for j in range(n + 1):
            acc = _axpy(acc, b[n][j], M[j])
        recon = recon and _strip(acc) == basis.Q[n]
    out.checks["q_reconstruction"] = recon
    out.checks["unit_diagonal"] = all(b[n][n] == 1 and b_hat[n][n] == 1 for n in range(size))
    out.checks["zero_constant_column"] = all(b[n][0] == 0 and b_hat[n][0] == 0 for n in range(1, size))
    c = spec.c
    if c(2) != 0:
        first_ok = True
        for n in range(2, size):
            want = c(n + 1) / c(2)
            if b_hat[n][1] != want:
                first_ok = False
                out.mismatches.append({"column": 1, "n": n, "projection": format_rational(b_hat[n][1]),
                                       "formula": format_rational(want)})
        out.checks["first_column_formula"] = first_ok
        second_ok = True
        for n in range(2, size):
            if n + 2 > spec.order:
                break
            want = second_coefficient_formula(spec, n, t0)
            if want is None:
                continue
            if b_hat[n][2] != want:
                second_ok = False
                out.mismatches.append({"column": 2, "n": n, "projection": format_rational(b_hat[n][2]),
                                       "formula": format_rational(want)})
        out.checks["second_column_formula"] = second_ok
    out.checks["three_term_recurrence"] = three_term_recurrence(basis).ok
    return out


@dataclass(frozen=True)
class OrthogonalityWitness:
    orthogonal: bool
    pair: Optional[Tuple[int, int]] = None
    value: Optional[MultiPoly] = None

    def to_json(self) -> dict:
        if self.orthogonal:
            return {"verdict": "ORTHOGONAL"}
        return {"verdict": "NOT_ORTHOGONAL", "pair": list(self.pair), "cross_moment": self.value.to_json()}


def orthogonality_witness(spec: CumulantSpec, nmax: int) -> OrthogonalityWitness:
    """First pair ``n < k`` (by ``n + k``, then ``n``) with ``E[M_n M_k] != 0``.

    Pairs with ``n + k <= nmax + 1`` are scanned, which sees every
    ``c_i`` with ``i <= nmax + 1`` through the ``t c_{n+k}`` term.
    """
    top = nmax + 1
    if top > spec.order:
        raise TruncationError(f"needs c_1..c_{top}; spec has order {spec.order}")
    for total in range(3, top + 1):
        for n in range(1, (total + 1) // 2):
            k = total - n
            cm = cross_moment(spec, n, k).poly
            if cm:
                return OrthogonalityWitness(False, (n, k), cm)
    return OrthogonalityWitness(True)
