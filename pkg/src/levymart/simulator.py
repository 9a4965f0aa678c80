"""Monte Carlo paths for Levy processes with atomic Kolmogorov measure.

``X_t = c1 t + sigma W_t + sum_i (y_i N_i(t) - (w_i / y_i) t)`` where
``N_i`` is Poisson with rate ``w_i / y_i**2``.

Randomness comes from numpy's Philox counter-based generator.  Paths are
produced in fixed-size blocks and block ``b`` draws from the substream keyed
by ``(seed, b)``, so an ensemble depends only on (measure, times, n_paths,
seed) and never on how many worker threads built it.

Conditional-expectation checks compare paired differences that have
conditional mean zero under the claim (e.g. ``M_n(X_t,t) - M_n(X_s,s)``
given ``X_s``), binned on the conditioning variables.  Per-bin z-scores are
combined into a chi-square statistic and reported through the
Wilson-Hilferty normal approximation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from .cumulants import CumulantSpec, KolmogorovMeasure, cumulants_from_measure
from .errors import InvalidArgumentError
from .martingales import martingale_family
from .moments import moments

BLOCK_SIZE = 8192
DEFAULT_THRESHOLD = 4.0
MIN_BIN_COUNT = 20
MIN_BINS = 2
MAX_EXACT_LEVELS = 200


@dataclass(frozen=True)
class PathEnsemble:
    times: tuple
    values: np.ndarray  # shape (n_paths, len(times))
    seed: int
    measure: KolmogorovMeasure

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    def index_of(self, t: float) -> int:
        for i, s in enumerate(self.times):
            if math.isclose(s, t, rel_tol=1e-12, abs_tol=1e-12):
                return i
        raise InvalidArgumentError(f"time {t} is not in the ensemble {self.times}")

    def at(self, t: float) -> np.ndarray:
        return self.values[:, self.index_of(t)]

    def spec(self, order: int) -> CumulantSpec:
        return cumulants_from_measure(self.measure, order)

    def is_lattice(self) -> bool:
        """True when every value lies on a discrete grid (no Gaussian part)."""
        return self.measure.sigma2 == 0


def _block(measure: KolmogorovMeasure, dts: np.ndarray, n: int, seed: int, index: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))
    inc = np.full((n, len(dts)), float(measure.c1) * dts)
    if measure.sigma2 > 0:
        inc += math.sqrt(float(measure.sigma2)) * np.sqrt(dts) * rng.standard_normal((n, len(dts)))
    for atom in measure.atoms:
        y, w = float(atom.y), float(atom.w)
        rate = w / (y * y)
        inc += y * rng.poisson(rate * dts, size=(n, len(dts))) - (w / y) * dts
    return np.cumsum(inc, axis=1)


def simulate_paths(measure: KolmogorovMeasure, times: Sequence[float], n_paths: int, seed: int,
                   workers: int = 1) -> PathEnsemble:
    times = tuple(float(t) for t in times)
    if not times:
        raise InvalidArgumentError("at least one time is required")
    if any(t <= 0 for t in times) or any(b <= a for a, b in zip(times, times[1:])):
        raise InvalidArgumentError("times must be positive and strictly increasing")
    if n_paths < 1:
        raise InvalidArgumentError("n_paths must be >= 1")
    dts = np.diff(np.concatenate(([0.0], times)))
    sizes = [min(BLOCK_SIZE, n_paths - start) for start in range(0, n_paths, BLOCK_SIZE)]
    jobs = [(measure, dts, size, seed, i) for i, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda a: _block(*a), jobs))
    else:
        blocks = [_block(*a) for a in jobs]
    return PathEnsemble(times, np.concatenate(blocks, axis=0), seed, measure)


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckReport:
    statistic: str
    estimate: float
    standard_error: float
    z_score: float
    sample_size: int
    threshold: float = DEFAULT_THRESHOLD
    inconclusive: bool = False
    details: Dict[str, object] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.inconclusive and abs(self.z_score) <= self.threshold

    @property
    def status(self) -> str:
        if self.inconclusive:
            return "inconclusive"
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        def num(v: float):
            return v if math.isfinite(v) else str(v)

        return {
            "statistic": self.statistic,
            "estimate": num(self.estimate),
            "standard_error": num(self.standard_error),
            "z_score": num(self.z_score),
            "threshold": self.threshold,
            "pass": self.passed,
            "status": self.status,
            "sample_size": self.sample_size,
            "details": self.details,
            "warnings": self.warnings,
        }


def _poly_fn(p) -> Callable[[np.ndarray, float], np.ndarray]:
    """Vectorised evaluator of a MultiPoly in (t, x)."""
    terms = [(e[0], e[1], float(c)) for e, c in p.items()]

    def fn(x: np.ndarray, t: float) -> np.ndarray:
        out = np.zeros_like(x, dtype=float)
        for et, ex, c in terms:
            out += c * t ** et * x ** ex
        return out

    return fn


def wilson_hilferty(chi2: float, dof: int) -> float:
    """Normal deviate approximating a chi-square with ``dof`` degrees of freedom."""
    a = 2.0 / (9.0 * dof)
    return ((chi2 / dof) ** (1.0 / 3.0) - (1.0 - a)) / math.sqrt(a)


def _labels(cond: np.ndarray, bins: int, exact: bool) -> np.ndarray:
    """Bin labels for one conditioning column: exact values or quantile bins."""
    if exact:
        _, lab = np.unique(cond, return_inverse=True)
        return lab
    edges = np.unique(np.quantile(cond, np.linspace(0, 1, bins + 1)[1:-1]))
    return np.searchsorted(edges, cond, side="right")


def _binned_zero_mean(name: str, diff: np.ndarray, conds: Sequence[np.ndarray], bins: int, exact: bool,
                      threshold: float, details: Optional[dict] = None) -> CheckReport:
    """Test ``E(diff | conds) = 0`` bin by bin."""
    n = len(diff)
    details = dict(details or {})
    # rounding residue (e.g. a Poisson bridge with no jumps) must not pose as signal
    scale = 1.0 + float(np.max(np.abs(diff))) if n else 1.0
    diff = np.where(np.abs(diff) < 1e-9 * scale, 0.0, diff)
    if n and np.all(diff == 0):
        details.update(bins_used=0, note="differences vanish identically")
        return CheckReport(name, 0.0, 0.0, 0.0, n, threshold, False, details)
    key = np.zeros(n, dtype=np.int64)
    for c in conds:
        lab = _labels(c, bins, exact)
        key = key * (int(lab.max()) + 1) + lab
    _, inv, counts = np.unique(key, return_inverse=True, return_counts=True)
    sums = np.bincount(inv, weights=diff)
    sq = np.bincount(inv, weights=diff * diff)
    keep = counts >= MIN_BIN_COUNT
    cnt = counts[keep].astype(float)
    mean = sums[keep] / cnt
    var = (sq[keep] - cnt * mean ** 2) / np.maximum(cnt - 1, 1)
    se = np.sqrt(np.maximum(var, 0) / cnt)
    zb = np.where(se > 0, mean / np.where(se > 0, se, 1), np.where(mean == 0, 0.0, np.inf))
    used = int(keep.sum())
    details.update(bins_used=used, bins_skipped=int((~keep).sum()), paths_used=int(cnt.sum()))
    if used < MIN_BINS:
        return CheckReport(name, math.nan, math.nan, math.nan, n, threshold, True, details,
                           [f"only {used} populated bins (need {MIN_BINS})"])
    chi2 = float(np.sum(zb ** 2))
    z = wilson_hilferty(chi2, used) if math.isfinite(chi2) else math.inf
    details.update(chi2=chi2, max_abs_bin_z=float(np.max(np.abs(zb))))
    return CheckReport(name, chi2 / used, math.sqrt(2.0 / used), z, n, threshold, False, details)


# ---------------------------------------------------------------------------
# checks


def empirical_moment_check(e: PathEnsemble, spec: CumulantSpec, n: int, t: float,
                           threshold: float = DEFAULT_THRESHOLD, kurtosis_bound: float = 1e3,
                           inject_fault: bool = False) -> CheckReport:
    """Sample mean of ``X_t^n`` against ``m_n(t)``.

    The injected fault predicts with the drift shifted by 1/2.
    """
    if n < 1 or n > spec.order:
        raise InvalidArgumentError(f"n must be in 1..{spec.order}")
    x = e.at(t) ** n
    use = spec.with_c1(spec.c(1) + Fraction(1, 2)) if inject_fault else spec
    pred = float(moments(use, n)[n].evaluate({"t": Fraction(t)}))
    est = float(np.mean(x))
    sd = float(np.std(x, ddof=1))
    se = sd / math.sqrt(len(x))
    z = (est - pred) / se if se > 0 else (0.0 if est == pred else math.inf)
    rep = CheckReport(f"moment_{n}", est, se, z, len(x), threshold, details={"prediction": pred, "t": t})
    if sd > 0:
        kurt = float(stats.kurtosis(x, fisher=False))
        rep.details["kurtosis"] = kurt
        if kurt > kurtosis_bound:
            rep.warnings.append(f"heavy tail: kurtosis of X^{n} is {kurt:.3g}")
    return rep


def martingale_mc_check(e: PathEnsemble, spec: CumulantSpec, n: int, s: float, t: float, bins: int = 20,
                        threshold: float = DEFAULT_THRESHOLD, inject_fault: bool = False) -> CheckReport:
    """``E(M_n(X_t,t) | X_s) = M_n(X_s,s)``; the fault evaluates the right side at time t."""
    if not s <= t:
        raise InvalidArgumentError("need s <= t")
    fn = _poly_fn(martingale_family(spec, n)[n])
    xs, xt = e.at(s), e.at(t)
    diff = fn(xt, t) - fn(xs, t if inject_fault else s)
    return _binned_zero_mean(f"martingale_{n}", diff, [xs], bins, e.is_lattice(), threshold,
                             {"s": s, "t": t, "n": n})


def reversed_mc_check(e: PathEnsemble, s: float, t: float, bins: int = 20,
                      threshold: float = DEFAULT_THRESHOLD, inject_fault: bool = False) -> CheckReport:
    """``E(M_1(X_s,s)/s | X_t) = M_1(X_t,t)/t``; the fault divides the right side by s."""
    if not s <= t:
        raise InvalidArgumentError("need s <= t")
    c1 = float(e.measure.c1)
    xs, xt = e.at(s), e.at(t)
    right = (xt - c1 * t) / (s if inject_fault else t)
    diff = (xs - c1 * s) / s - right
    return _binned_zero_mean("reversed_m1", diff, [xt], bins, e.is_lattice(), threshold, {"s": s, "t": t})


def harness_mc_check(e: PathEnsemble, s: float, t: float, u: float, bins: int = 10,
                     threshold: float = DEFAULT_THRESHOLD, inject_fault: bool = False) -> CheckReport:
    """Linear interpolation of M_1 between s and u given ``(X_s, X_u)``.

    Conditioning on the two endpoint values is enough for a process with
    independent increments.  The fault swaps the interpolation weights.
    """
    if not s < t < u:
        raise InvalidArgumentError("need s < t < u")
    c1 = float(e.measure.c1)
    xs, xt, xu = e.at(s), e.at(t), e.at(u)
    ws, wu = (u - t) / (u - s), (t - s) / (u - s)
    if inject_fault:
        ws, wu = wu, ws
    diff = (xt - c1 * t) - ws * (xs - c1 * s) - wu * (xu - c1 * u)
    return _binned_zero_mean("harness_m1", diff, [xs, xu], bins, e.is_lattice(), threshold,
                             {"s": s, "t": t, "u": u})


# ---------------------------------------------------------------------------
# exact oracles for the unit Poisson process


def _is_unit_poisson(m: KolmogorovMeasure) -> bool:
    return m.sigma2 == 0 and m.c1 == 1 and len(m.atoms) == 1 and m.atoms[0].y == 1 and m.atoms[0].w == 1


def bridge_mean(n: int, p: float) -> float:
    """Mean of Binomial(n, p) summed from the pmf."""
    k = np.arange(n + 1)
    return float(np.sum(k * stats.binom.pmf(k, n, p)))


def poisson_bridge_check(e: PathEnsemble, s: float, t: float, u: Optional[float] = None,
                         threshold: float = DEFAULT_THRESHOLD, inject_fault: bool = False) -> CheckReport:
    """Binned MC conditional means against the exact binomial-bridge law.

    Without ``u``: ``E(M_1(X_s,s)/s | X_t = n)`` vs ``(n s/t - s)/s``.
    With ``u`` (s < t < u): ``E(M_1(X_t,t) | X_s=a, X_u=b)`` vs
    ``a + E Bin(b-a, (t-s)/(u-s)) - t``.  The fault uses the wrong thinning
    probability.
    """
    if not _is_unit_poisson(e.measure):
        raise InvalidArgumentError("the binomial bridge oracle needs the unit Poisson measure")
    if u is None:
        xs, xt = e.at(s), e.at(t)
        p = s / t if not inject_fault else min(1.0, 1.5 * s / t)
        levels, inv = np.unique(xt, return_inverse=True)
        pred_level = np.array([(bridge_mean(int(round(n)), p) - s) / s for n in levels])
        diff = (xs - s) / s - pred_level[inv]
        return _binned_zero_mean("poisson_bridge_reversed", diff, [xt], 0, True, threshold, {"s": s, "t": t})
    xs, xt, xu = e.at(s), e.at(t), e.at(u)
    p = (t - s) / (u - s) if not inject_fault else (u - t) / (u - s)
    gaps = np.rint(xu - xs).astype(int)
    cache: Dict[int, float] = {}
    pred = np.empty_like(xt)
    for i, g in enumerate(gaps):
        if g not in cache:
            cache[g] = bridge_mean(int(g), p)
        pred[i] = cache[g]
    diff = (xt - t) - (xs + pred - t)
    return _binned_zero_mean("poisson_bridge_harness", diff, [xs, xu], 0, True, threshold, {"s": s, "t": t, "u": u})


# ---------------------------------------------------------------------------
# k-statistics


def cumulant_check(e: PathEnsemble, spec: CumulantSpec, t: float = 1.0, orders: Sequence[int] = (1, 2, 3, 4),
                   batches: int = 50, threshold: float = 5.0) -> List[CheckReport]:
    """k-statistics of ``X_t`` (batch means) against ``c_n t``."""
    x = e.at(t)
    parts = np.array_split(x, batches)
    out = []
    for n in orders:
        ks = np.array([stats.kstat(p, n) for p in parts])
        est = float(np.mean(ks))
        se = float(np.std(ks, ddof=1) / math.sqrt(batches))
        pred = float(spec.c(n)) * t
        z = (est - pred) / se if se > 0 else (0.0 if est == pred else math.inf)
        out.append(CheckReport(f"kstat_{n}", est, se, z, len(x), threshold, details={"prediction": pred, "t": t}))
    return out
