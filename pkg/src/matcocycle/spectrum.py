"""Entropy spectrum by Legendre transform of pressure brackets.

The Lyapunov spectrum ``h_top(E(alpha))`` of the top exponent is recovered
from the pressure curve ``t -> P(t)`` along a direction (default ``e_1``):
the slope ``alpha_t = P'(t)`` is the exponent of the equilibrium state and
``h = P(t) - t alpha_t`` its entropy.  Slopes come from central differences
of bracket midpoints; the exact derivative of the finite-depth log-sum is
offered as a cross-check.

All entropies are in nats and exponents in nats per symbol.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .cocycle import CocycleSpec
from .pressure import (ROUNDING, PressureBracket, QuasiMultConstants, exponent_floor, growth_extremes,
                       logsumexp, pressure_bracket, weight_vector, word_data)
from .subshift import topological_entropy

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"


class SpectrumError(ValueError):
    """Slopes of the pressure curve are not monotone at the requested resolution."""

    def __init__(self, triples: list[tuple[float, float, float]]):
        self.triples = triples
        listing = ", ".join(f"({a:g}, {b:g}, {c:g})" for a, b, c in triples)
        super().__init__(f"grid too coarse for monotone slopes; offending t-triples: {listing}")


def parse_grid(text: str) -> np.ndarray:
    """``"A:B:STEP"`` (inclusive of B up to rounding) or ``"t1,t2,..."``."""
    text = text.strip()
    if ":" in text:
        a, b, step = (float(x) for x in text.split(":"))
        if step <= 0 or b < a:
            raise ValueError(f"bad grid {text!r}: need A <= B and STEP > 0")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return a + step * np.arange(count)
    vals = np.array([float(x) for x in text.split(",") if x.strip()])
    if len(vals) == 0:
        raise ValueError("empty grid")
    return vals


@dataclass(frozen=True)
class PressureCurve:
    """Brackets of ``P(t * direction)`` on a strictly increasing scalar grid."""

    spec: CocycleSpec
    n: int
    t: np.ndarray
    brackets: tuple[PressureBracket, ...]
    direction: np.ndarray

    def __post_init__(self):
        if len(self.t) == 0:
            raise ValueError("pressure curve needs a nonempty grid")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("grid must be strictly increasing")

    @property
    def lower(self) -> np.ndarray:
        return np.array([b.lower for b in self.brackets])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b.upper for b in self.brackets])

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def __len__(self):
        return len(self.t)


def pressure_curve(spec: CocycleSpec, t_grid: Sequence[float], n: int, direction=None,
                   qm: QuasiMultConstants | None = None, kappa: float | None = None,
                   certified: bool | None = None, cap: int | None = None,
                   shards: int = 1) -> PressureCurve:
    t = np.asarray(sorted(float(x) for x in t_grid))
    d = weight_vector(1.0 if direction is None else direction, spec.k)
    brackets = tuple(pressure_bracket(spec, s * d, n, qm=qm, kappa=kappa, certified=certified,
                                      cap=cap, shards=shards) for s in t)
    return PressureCurve(spec, n, t, brackets, d)


def _central(t, y):
    """Central differences inside, one-sided differences at the ends."""
    s = np.empty_like(y)
    s[1:-1] = (y[2:] - y[:-2]) / (t[2:] - t[:-2])
    s[0] = (y[1] - y[0]) / (t[1] - t[0])
    s[-1] = (y[-1] - y[-2]) / (t[-1] - t[-2])
    return s


def exact_slopes(spec: CocycleSpec, t_grid: Sequence[float], n: int, direction=None,
                 cap: int | None = None) -> np.ndarray:
    """``d/dt log(Z_n(t d))/n``: the Gibbs-weighted mean of ``d . log Phi(J) / n``."""
    d = weight_vector(1.0 if direction is None else direction, spec.k)
    wd = word_data(spec, n, cap)
    proj = sum(dl * wd.log_norms(l) for l, dl in enumerate(d, start=1) if dl != 0.0)
    out = []
    for s in t_grid:
        e = s * proj
        w = np.exp(e - logsumexp(e))
        out.append(float(np.dot(w, proj)) / n)
    return np.array(out)


@dataclass(frozen=True)
class SpectrumPoint:
    alpha: float
    h: float
    t_source: float
    h_uncertainty: float
    region_flag: str = INTERIOR


def spectrum_curve(spec: CocycleSpec, t_grid: Sequence[float], n: int, curve: PressureCurve | None = None,
                   exact_slope: bool = False, qm: QuasiMultConstants | None = None,
                   kappa: float | None = None, cap: int | None = None, shards: int = 1,
                   dedupe_tol: float = 1e-7) -> list[SpectrumPoint]:
    """Points ``(alpha_t, P(t) - t alpha_t)`` in increasing alpha.

    ``P`` is the bracket midpoint.  The slope uses central differences of the
    midpoints, or with ``exact_slope`` the derivative of the depth-n log-sum.
    The uncertainty of ``h`` is the bracket half-width plus ``|t|`` times half
    the disagreement between slopes of the lower and upper curves.  Entropies
    are clipped to ``[0, h_top]``.  Points that coincide (affine pressure)
    are merged.
    """
    if curve is None:
        curve = pressure_curve(spec, t_grid, n, qm=qm, kappa=kappa, cap=cap, shards=shards)
    t = curve.t
    mid, lo, up, width = curve.mid, curve.lower, curve.upper, curve.width
    h_top = topological_entropy(spec.shift)
    if len(t) == 1:
        slope = exact_slopes(spec, t, curve.n, curve.direction, cap)
        spread = np.zeros(1)
    else:
        slope = _central(t, mid)
        spread = np.abs(_central(t, up) - _central(t, lo))
        bad = []
        for i in range(len(t) - 1):
            drop = slope[i] - slope[i + 1]
            allowed = 2 * (width[max(i - 1, 0):i + 3].sum()) / np.min(np.diff(t)) + 1e-9
            if drop > allowed:
                j = min(max(i, 1), len(t) - 2)
                bad.append((float(t[j - 1]), float(t[j]), float(t[j + 1])))
        if bad:
            raise SpectrumError(bad)
        if exact_slope:
            slope = exact_slopes(spec, t, curve.n, curve.direction, cap)
    points = []
    for i, s in enumerate(t):
        a = float(slope[i])
        u = 0.5 * float(width[i]) + abs(s) * 0.5 * float(spread[i])
        h = float(mid[i]) - s * a
        h = min(max(h, 0.0), h_top)
        flag = INTERIOR if h > u else BOUNDARY
        points.append(SpectrumPoint(a, h, float(s), u, flag))
    points.sort(key=lambda p: (p.alpha, p.t_source))
    merged: list[SpectrumPoint] = []
    for p in points:
        if merged and abs(p.alpha - merged[-1].alpha) <= dedupe_tol and abs(p.h - merged[-1].h) <= dedupe_tol:
            q = merged[-1]
            if p.h_uncertainty < q.h_uncertainty:
                merged[-1] = p
            continue
        merged.append(p)
    return merged


def concavity_violations(points: Sequence[SpectrumPoint], slack: float = 1e-12) -> list[tuple[int, float]]:
    """Consecutive triples where the chord rises above the middle point by more than the uncertainties."""
    out = []
    for i in range(1, len(points) - 1):
        a, b, c = points[i - 1], points[i], points[i + 1]
        if c.alpha - a.alpha <= 0:
            continue
        lam = (b.alpha - a.alpha) / (c.alpha - a.alpha)
        chord = (1 - lam) * a.h + lam * c.h
        excess = chord - b.h
        if excess > a.h_uncertainty + b.h_uncertainty + c.h_uncertainty + slack:
            out.append((i, excess))
    return out


def legendre_entropy(curve: PressureCurve, alpha: float) -> tuple[float, float, str]:
    """``min_t (upper(t) - alpha t)`` over the grid, its uncertainty and a region flag.

    The uncertainty is the bracket width at the minimizing grid point plus
    the grid step times the gap between ``alpha`` and the local slope.  If
    ``alpha`` lies beyond the slope range of the curve the flag is
    ``exterior`` and ``h = 0`` is reported.  Within the uncertainty of an end
    slope, with the minimum at that end of the grid, it is ``boundary`` and
    the uncertainty grows to ``h`` because the infimum may lie off the grid.
    """
    if len(curve) == 0:
        raise ValueError("empty curve")
    t = curve.t
    vals = curve.upper - alpha * t
    i = int(np.argmin(vals))
    h = float(vals[i])
    if len(t) > 1:
        slope = _central(t, curve.mid)
        step = float(np.max(np.diff(t[max(i - 1, 0):i + 2])))
        u = float(curve.width[i]) + step * abs(float(slope[i]) - alpha)
        s_lo, s_hi = float(slope[0]), float(slope[-1])
    else:
        u = float(curve.width[0])
        s_lo = s_hi = float(exact_slopes(curve.spec, t, curve.n, curve.direction)[0])
    tol = u + 1e-9
    if alpha < s_lo - tol or alpha > s_hi + tol:
        return 0.0, u, EXTERIOR
    h = max(h, 0.0)
    if (alpha < s_lo + tol and i == 0) or (alpha > s_hi - tol and i == len(t) - 1):
        # the infimum may lie beyond the grid; only 0 <= h_true <= h is certain
        return h, max(u, h), BOUNDARY
    return h, u, INTERIOR


@dataclass(frozen=True)
class LyapunovInterval:
    alpha: tuple[float, float]
    beta: tuple[float, float]
    n: int
    certified_alpha: bool


def lyapunov_interval(spec: CocycleSpec, n: int, kappa: float | None = None, cap: int | None = None,
                      shards: int = 1) -> LyapunovInterval:
    """Brackets for the extreme top exponents ``alpha(A) <= beta(A)``.

    ``beta`` lies between the best periodic spectral radius and the largest
    norm.  ``alpha`` lies below the smallest norm over cyclically admissible
    words and above the measure-independent exponent floor.  With a kappa
    certificate on the full shift, ``alpha`` is the sandwich
    ``[(m_n + log kappa)/n, m_n/n]`` with ``m_n`` the minimal log-norm.
    A single symbol has one orbit, so both brackets are ``log rho(A_0)``.
    """
    if spec.q == 1:
        r = math.log(float(np.max(np.abs(np.linalg.eigvals(spec.generators[0])))))
        return LyapunovInterval((r, r), (r, r), n, True)
    g = growth_extremes(spec, n, kappa, cap, shards)
    beta = _widen(g.beta_lower, g.beta_upper)
    if kappa is not None and spec.shift.is_full:
        # the sandwich is reported as computed so its width is exactly -log(kappa)/n
        m = float(np.min(word_data(spec, n, cap, shards).log_norms(1)))
        alpha = ((m + math.log(kappa)) / n, m / n)
        return LyapunovInterval(alpha, beta, n, True)
    floor = exponent_floor(spec, 1, n, None, cap, shards)
    hi = g.alpha_upper if g.alpha_upper is not None else g.beta_upper
    return LyapunovInterval(_widen(min(floor, hi), hi), beta, n, False)


def _widen(lo: float, hi: float) -> tuple[float, float]:
    """The floating-point allowance used for pressure brackets."""
    return lo - ROUNDING * max(1.0, abs(lo)), hi + ROUNDING * max(1.0, abs(hi))


@dataclass(frozen=True)
class GibbsReport:
    t: tuple[float, ...]
    n: int
    h_n: float
    chi_n: tuple[float, ...]
    gibbs_ratio_bound: float
    bracket: PressureBracket

    @property
    def free_energy(self) -> float:
        """``h_n + t . chi_n``; equals ``log(Z_n)/n``."""
        return self.h_n + float(np.dot(self.t, self.chi_n))


def gibbs_report(spec: CocycleSpec, t, n: int, qm: QuasiMultConstants | None = None,
                 kappa: float | None = None, bracket: PressureBracket | None = None,
                 cap: int | None = None, shards: int = 1) -> GibbsReport:
    """Depth-n Gibbs weights, their entropy and exponents, and the two-sided ratio bound.

    ``chi_n[l-1]`` is the weighted mean of ``log||A^l(J)||/n`` for each level l.
    """
    tv = weight_vector(t, spec.k)
    wd = word_data(spec, n, cap, shards)
    e = wd.energies(tv)
    logZ = logsumexp(e)
    logw = e - logZ
    w = np.exp(logw)
    h_n = max(0.0, -float(np.dot(w, logw)) / n)
    chi = tuple(float(np.dot(w, wd.log_norms(l))) / n for l in range(1, spec.k + 1))
    if bracket is None:
        bracket = pressure_bracket(spec, tv, n, qm=qm, kappa=kappa, cap=cap, shards=shards)
    logg = -n * bracket.mid + e
    ratio = float(np.exp(np.max(np.abs(logw - logg))))
    return GibbsReport(tuple(float(x) for x in tv), n, h_n, chi, ratio, bracket)


# ---------------------------------------------------------------- CSV output


def _fmt(x: float) -> str:
    return repr(float(x))


def write_pressure_csv(curve: PressureCurve, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "lower", "upper"])
    for s, b in zip(curve.t, curve.brackets):
        w.writerow([_fmt(s), _fmt(b.lower), _fmt(b.upper)])


def write_spectrum_csv(points: Sequence[SpectrumPoint], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["alpha", "h", "uncertainty", "t_source", "region_flag"])
    for p in points:
        w.writerow([_fmt(p.alpha), _fmt(p.h), _fmt(p.h_uncertainty), _fmt(p.t_source), p.region_flag])


def write_gibbs_csv(reports: Sequence[GibbsReport], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    k = len(reports[0].t) if reports else 0
    w.writerow(["n"] + [f"t{l}" for l in range(1, k + 1)] + ["h_n", "chi_n", "ratio_bound"])
    for r in reports:
        w.writerow([r.n] + [_fmt(x) for x in r.t] + [_fmt(r.h_n), _fmt(r.chi_n[0]), _fmt(r.gibbs_ratio_bound)])
