"""Process specifications: cumulant sequences and discrete Kolmogorov measures.

A Lévy process with all moments is pinned down by the cumulants
``c_1, c_2, ...`` of ``X_1``.  For ``i >= 2`` they are the moments of the
Kolmogorov measure ``dK``: ``c_i = ∫ y**(i-2) dK(y)``, so the sequence
``(c_2, c_3, ...)`` must be a (possibly degenerate) moment sequence.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Mapping, Optional, Sequence, Tuple, Union

from .errors import InvalidArgumentError, RejectedSpecError, TruncationError
from .ratpoly import format_rational, parse_rational


@dataclass(frozen=True)
class CumulantSpec:
    """Cumulants ``c_1..c_N``; stored 0-based, read 1-based through :meth:`c`."""

    values: Tuple[Fraction, ...]

    def __init__(self, values: Sequence[Union[int, str, Fraction]]):
        vals = tuple(parse_rational(v) for v in values)
        if len(vals) < 2:
            raise InvalidArgumentError("a cumulant spec needs at least c_1 and c_2")
        if vals[1] < 0:
            raise InvalidArgumentError(f"c_2 is a variance rate and must be >= 0, got {vals[1]}")
        object.__setattr__(self, "values", vals)

    @property
    def order(self) -> int:
        return len(self.values)

    def c(self, i: int) -> Fraction:
        if i < 1:
            raise InvalidArgumentError(f"cumulant index must be >= 1, got {i}")
        if i > self.order:
            raise TruncationError(f"c_{i} requested but the spec stops at c_{self.order}")
        return self.values[i - 1]

    def truncated(self, order: int) -> "CumulantSpec":
        if order > self.order:
            raise TruncationError(f"cannot extend a spec of order {self.order} to {order}")
        return CumulantSpec(self.values[:order])

    def with_c1(self, c1) -> "CumulantSpec":
        return CumulantSpec((parse_rational(c1),) + self.values[1:])

    def __add__(self, other: "CumulantSpec") -> "CumulantSpec":
        """Cumulants of the sum of two independent processes."""
        n = min(self.order, other.order)
        return CumulantSpec([a + b for a, b in zip(self.values[:n], other.values[:n])])

    def scaled(self, alpha) -> "CumulantSpec":
        """Cumulants of ``alpha * X``: ``c_k -> alpha**k c_k``."""
        alpha = parse_rational(alpha)
        return CumulantSpec([alpha ** (k + 1) * c for k, c in enumerate(self.values)])

    def to_json(self) -> dict:
        return {"cumulants": [format_rational(c) for c in self.values]}

    def __repr__(self) -> str:
        return "CumulantSpec(" + ", ".join(str(c) for c in self.values) + ")"


@dataclass(frozen=True)
class Atom:
    y: Fraction
    w: Fraction


@dataclass(frozen=True)
class KolmogorovMeasure:
    """Gaussian mass ``sigma2`` at 0 plus weighted atoms away from 0."""

    sigma2: Fraction
    atoms: Tuple[Atom, ...] = ()
    c1: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "sigma2", parse_rational(self.sigma2))
        object.__setattr__(self, "c1", parse_rational(self.c1))
        atoms = []
        for a in self.atoms:
            if not isinstance(a, Atom):
                y, w = a
                a = Atom(parse_rational(y), parse_rational(w))
            atoms.append(a)
        if self.sigma2 < 0:
            raise InvalidArgumentError("sigma2 must be >= 0")
        locs = [a.y for a in atoms]
        if any(y == 0 for y in locs):
            raise InvalidArgumentError("atom locations must be nonzero (mass at 0 is sigma2)")
        if len(set(locs)) != len(locs):
            raise InvalidArgumentError("atom locations must be pairwise distinct")
        if any(a.w <= 0 for a in atoms):
            raise InvalidArgumentError("atom weights must be > 0")
        object.__setattr__(self, "atoms", tuple(atoms))

    @property
    def total_mass(self) -> Fraction:
        return self.sigma2 + sum((a.w for a in self.atoms), Fraction(0))

    def to_json(self) -> dict:
        return {
            "c1": format_rational(self.c1),
            "sigma2": format_rational(self.sigma2),
            "atoms": [{"y": format_rational(a.y), "w": format_rational(a.w)} for a in self.atoms],
        }


def cumulants_from_measure(m: KolmogorovMeasure, order: int) -> CumulantSpec:
    if order < 2:
        raise InvalidArgumentError("order must be >= 2")
    cs = [m.c1]
    for i in range(2, order + 1):
        ci = m.sigma2 if i == 2 else Fraction(0)
        ci += sum((a.w * a.y ** (i - 2) for a in m.atoms), Fraction(0))
        cs.append(ci)
    return CumulantSpec(cs)


# ---------------------------------------------------------------------------
# diagnostics


class HankelVerdict(str, enum.Enum):
    POSITIVE_DEFINITE = "positive-definite"
    DEGENERATE = "degenerate"
    INVALID = "invalid"


@dataclass
class Diagnostics:
    hankel_verdict: HankelVerdict
    jensen_chain_ok: bool
    variance_gap: Optional[Fraction]
    carleman_partial_sum: float
    minors: List[Fraction] = field(default_factory=list)
    support_size: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "hankel_verdict": self.hankel_verdict.value,
            "jensen_chain_ok": self.jensen_chain_ok,
            "variance_gap": None if self.variance_gap is None else format_rational(self.variance_gap),
            "carleman_partial_sum": self.carleman_partial_sum,
            "minors": [format_rational(d) for d in self.minors],
            "support_size": self.support_size,
            "notes": list(self.notes),
        }


def leading_minors(matrix: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    return [_det([row[: k + 1] for row in matrix[: k + 1]]) for k in range(len(matrix))]


def _det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(v) for v in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def _solve(m: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> List[Fraction]:
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(m, rhs)]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k] / a[k][k]
                for j in range(k, n + 1):
                    a[i][j] -= f * a[k][j]
    return [a[i][n] / a[i][i] for i in range(n)]


def _degenerate_consistent(alpha: Sequence[Fraction], r: int) -> bool:
    """Does ``alpha`` (moments of dK) fit a measure with exactly ``r`` atoms?

    With the r x r Hankel block positive definite, the monic polynomial
    ``P_r`` orthogonal to lower degrees is fixed; an r-atomic measure is
    supported on its roots, so every available moment must satisfy the
    recurrence ``sum_i p_i alpha_{i+j} = 0``.
    """
    if r == 0:
        return all(a == 0 for a in alpha)
    hank = [[alpha[i + j] for j in range(r)] for i in range(r)]
    p = _solve(hank, [-alpha[i + r] for i in range(r)]) + [Fraction(1)]
    for j in range(len(alpha) - r):
        if sum(p[i] * alpha[i + j] for i in range(r + 1)) != 0:
            return False
    return True


def validate_cumulants(spec: CumulantSpec) -> Diagnostics:
    notes: List[str] = []
    alpha = list(spec.values[1:])  # moments of dK: alpha[j] = c_{j+2}
    size = (len(alpha) - 1) // 2 + 1  # Hankel [alpha_{i+j}], 0 <= i, j < size
    hank = [[alpha[i + j] for j in range(size)] for i in range(size)]
    minors = leading_minors(hank)

    r = 0
    while r < len(minors) and minors[r] > 0:
        r += 1
    support = None
    if r == len(minors):
        verdict = HankelVerdict.POSITIVE_DEFINITE
    elif minors[r] < 0:
        verdict = HankelVerdict.INVALID
        notes.append(f"Hankel minor of size {r + 1} is negative: not a moment sequence")
    elif _degenerate_consistent(alpha, r):
        verdict = HankelVerdict.DEGENERATE
        support = r
        notes.append(f"dK is supported on {r} point(s)")
    else:
        verdict = HankelVerdict.INVALID
        notes.append(
            f"Hankel minor of size {r + 1} vanishes but later moments are not those of a {r}-point measure"
        )

    c2 = spec.c(2)
    jensen_ok = True
    if c2 > 0:
        ratios = [spec.values[2 * k + 1] / c2 for k in range(1, (spec.order - 2) // 2 + 1)]
        if any(a < 0 for a in ratios):
            jensen_ok = False
        else:
            # a_k^(1/2k) <= a_{k+1}^(1/(2k+2))  <=>  a_k^(k+1) <= a_{k+1}^k
            for k in range(1, len(ratios)):
                if ratios[k - 1] ** (k + 1) > ratios[k] ** k:
                    jensen_ok = False
                    notes.append(f"Jensen chain breaks between c_{2 * k + 2} and c_{2 * k + 4}")
                    break
    elif any(spec.values[2:]):
        jensen_ok = False

    gap = None
    if c2 > 0 and spec.order >= 4:
        gap = spec.c(4) / c2 - (spec.c(3) / c2) ** 2
    elif c2 == 0:
        gap = Fraction(0)
        notes.append("c_2 = 0: dK is the zero measure (deterministic drift)")
    if gap is not None and gap < 0 and verdict is not HankelVerdict.INVALID:
        # cannot happen for genuine measures; keep the record honest if it does
        verdict = HankelVerdict.INVALID
        notes.append("negative variance of dK/c_2")

    carleman = 0.0
    for n in range(1, spec.order // 2 + 1):
        c2n = spec.values[2 * n - 1]
        if c2n > 0:
            carleman += float(c2n) ** (-1.0 / (2 * n))
        elif c2n == 0:
            notes.append(f"c_{2 * n} = 0: Carleman term is infinite and was skipped")
    notes.append("Carleman partial sum is heuristic only; it never decides determinacy")

    return Diagnostics(verdict, jensen_ok, gap, carleman, minors, support, notes)


class MeasureClass(str, enum.Enum):
    GAUSSIAN = "GAUSSIAN"
    POISSON_GAUSSIAN_MIXTURE = "POISSON_GAUSSIAN_MIXTURE"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class Classification:
    kind: MeasureClass
    atom: Optional[Fraction] = None
    variance_gap: Optional[Fraction] = None

    def to_json(self) -> dict:
        return {
            "class": self.kind.value,
            "atom": None if self.atom is None else format_rational(self.atom),
            "variance_gap": None if self.variance_gap is None else format_rational(self.variance_gap),
        }


def classify_measure(spec: CumulantSpec) -> Classification:
    if spec.order < 4:
        raise InvalidArgumentError("classification needs c_1..c_4")
    diag = validate_cumulants(spec)
    if diag.hankel_verdict is HankelVerdict.INVALID:
        raise RejectedSpecError("; ".join(diag.notes))
    c2 = spec.c(2)
    if c2 == 0 or any(spec.values[2 * k - 1] == 0 for k in range(2, spec.order // 2 + 1)):
        return Classification(MeasureClass.GAUSSIAN, Fraction(0), diag.variance_gap)
    if diag.variance_gap == 0:
        atom = spec.c(3) / c2
        if atom == 0:
            return Classification(MeasureClass.GAUSSIAN, atom, diag.variance_gap)
        return Classification(MeasureClass.POISSON_GAUSSIAN_MIXTURE, atom, diag.variance_gap)
    return Classification(MeasureClass.GENERAL, None, diag.variance_gap)


# ---------------------------------------------------------------------------
# JSON config


def spec_from_config(data: Mapping) -> Union[CumulantSpec, KolmogorovMeasure]:
    """Parse either ``{"cumulants": [...]}`` or the measure form (never both)."""
    has_c = "cumulants" in data
    has_m = any(k in data for k in ("c1", "sigma2", "atoms"))
    if has_c == has_m:
        raise InvalidArgumentError("config must contain exactly one of: cumulants, or c1/sigma2/atoms")
    if has_c:
        if not isinstance(data["cumulants"], list):
            raise InvalidArgumentError("cumulants must be a list")
        return CumulantSpec(data["cumulants"])
    atoms = []
    for rec in data.get("atoms", []):
        try:
            atoms.append(Atom(parse_rational(rec["y"]), parse_rational(rec["w"])))
        except (KeyError, TypeError):
            raise InvalidArgumentError(f"bad atom record {rec!r}") from None
    return KolmogorovMeasure(
        sigma2=parse_rational(data.get("sigma2", 0)),
        atoms=tuple(atoms),
        c1=parse_rational(data.get("c1", 0)),
    )


def load_config(path: Union[str, Path]) -> Union[CumulantSpec, KolmogorovMeasure]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidArgumentError("config must be a JSON object")
    return spec_from_config(data)


def as_spec(obj: Union[CumulantSpec, KolmogorovMeasure], order: int) -> CumulantSpec:
    if isinstance(obj, KolmogorovMeasure):
        return cumulants_from_measure(obj, order)
    return obj


POISSON = KolmogorovMeasure(Fraction(0), (Atom(Fraction(1), Fraction(1)),), Fraction(1))
BROWNIAN = KolmogorovMeasure(Fraction(1), (), Fraction(0))
