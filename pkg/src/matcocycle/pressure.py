"""Subadditive pressure of singular-value potentials on cylinder sums.

For a weight vector ``t = (t_1, ..., t_k)`` the potential of a word is

    phi_t(I) = prod_l ||A^l(I)||^{t_l}

(``A^l`` the l-th exterior power), and ``Z_n(t) = sum_{I in L(n)} phi_t(I)``.

Bracket algebra
---------------
Upper bound, ``t >= 0``.  Cutting a word of length ``a + b`` gives admissible
pieces and ``phi_t`` is submultiplicative, so ``Z_{a+b} <= Z_a Z_b`` and by
Fekete ``P(t) = inf_n log(Z_n)/n``.  A sharper bound keeps track of the
symbols at the cuts: with ``M[a, b] = sum_{I: I_0 = a} phi_t(I) Q[I_{n-1}, b]``
every word of length ``jn`` is bounded by a path of ``M``, hence
``P(t) <= log(rho(M))/n``.  The reported upper is the smaller of the two.

Lower bound from quasi-multiplicativity.  Suppose every pair ``I, J`` has a
connector ``K`` with ``|K| <= m`` and ``phi(IKJ) >= C phi(I) phi(J)``.  The
map ``(I, J) -> IKJ`` is injective into words of lengths ``a+b .. a+b+m`` and
``Z_{N+g} <= Z_N Z_g``, so

    C Z_a Z_b <= sum_{g=0}^{m} Z_{a+b+g} <= Z_{a+b} S_m,   S_m = sum_{g=0}^m Z_g

with ``Z_0 = 1``.  Thus ``log Z_n + log C - log S_m`` is superadditive and

    P(t) >= (log Z_n + log C - log S_m) / n.

``S_m <= (m+1) exp(m B)`` with ``B = max(0, log Z_1)`` recovers the cruder
``log(m+1) + m B`` correction.  An almost-multiplicativity constant ``kappa``
on the full shift is the case ``m = 0``, ``C = kappa**t_1``.

Variational lower bound.  For any invariant measure ``mu``,
``P(t) >= h(mu) + sum_l t_l chi_l(mu)``.  We use stationary Markov measures
on the subshift, whose entropy is explicit, and bound each top exponent
``chi_l`` from the side the sign of ``t_l`` requires:

* above by ``E_mu log||A^l(I)|| / n`` (subadditivity);
* below by ``E_mu log sigma_min(A^l(I)) / n`` (``log sigma_min`` is
  superadditive), by the exact exponent along a ray fixed by every generator,
  and, with a ``kappa`` certificate, by ``(E_mu log||A(I)|| + log kappa)/n``.

Periodic-orbit measures add ``sum_l t_l log(rho(A^l(I)))/|I|``.  These bounds
hold for every ``t``.

Weights ``t <= 0``.  Now ``phi_t`` is supermultiplicative, so the same block
matrix ``M`` bounds P from below, ``P(t) >= log(rho(M))/n`` (on the full shift
``rho(M) = Z_n``).  From above, ``P(t) = sup_mu h(mu) + sum_l t_l chi_l(mu)
<= h_top + sum_l t_l a_l`` where ``a_l`` is any lower bound on ``chi_l``
valid for every invariant measure (:func:`exponent_floor`).

Weights of mixed sign have no certified upper bound here; the plain
cylinder-sum value is reported with heuristic rigor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize

from .cocycle import CocycleSpec, cylinder_norm_table
from .matkernel import product_stack
from .subshift import TransitionMatrix, connector, is_primitive, topological_entropy, word_array

#: relative allowance subtracted from lower bounds for floating-point rounding
ROUNDING = 1e-13

CERTIFIED = "certified"
HEURISTIC = "heuristic"


class BracketError(RuntimeError):
    """Internal inconsistency: a certified lower bound exceeded the upper bound."""


def weight_vector(t, k: int) -> np.ndarray:
    """Scalar ``t`` means ``(t, 0, ..., 0)``; shorter vectors are zero padded."""
    a = np.atleast_1d(np.asarray(t, dtype=float))
    if a.ndim != 1 or len(a) > k:
        raise ValueError(f"weight vector must have at most {k} entries")
    if not np.all(np.isfinite(a)):
        raise ValueError("weight vector has non-finite entries")
    out = np.zeros(k)
    out[:len(a)] = a
    return out


def logsumexp(values: np.ndarray) -> float:
    """Order-independent log-sum-exp (exactly rounded inner sum)."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return -math.inf
    top = float(np.max(v))
    if not math.isfinite(top):
        return top
    terms = np.sort(np.exp(v - top))[::-1]
    return top + math.log(math.fsum(terms.tolist()))


@dataclass(frozen=True)
class QuasiMultConstants:
    """``||A^l(IKJ)|| >= C ||A^l(I)|| ||A^l(J)||`` with ``|K| <= m``, tested for ``|I|,|J| <= n_max``."""

    m: int
    C: float
    n_max: int
    level: int = 1

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("quasi-multiplicativity constant must be positive")


@dataclass(frozen=True)
class PressureBracket:
    t: tuple[float, ...]
    n: int
    lower: float
    upper: float
    rigor: str
    lower_source: str = ""

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol


class WordData:
    """Per-depth word list with log-norms and log smallest singular values per level.

    Built lazily and cached on the instance so brackets along a t-grid share
    the expensive products.
    """

    def __init__(self, spec: CocycleSpec, n: int, cap: int | None = None, shards: int = 1):
        self.spec = spec
        self.n = n
        self.cap = cap
        self.shards = shards
        self._norms: dict[int, np.ndarray] = {}
        self._smin: dict[int, np.ndarray] = {}
        self.words = word_array(spec.shift, n, cap)

    def log_norms(self, l: int) -> np.ndarray:
        if l not in self._norms:
            self._norms[l] = cylinder_norm_table(self.spec, self.n, l, self.cap, self.shards).log_norms
        return self._norms[l]

    def log_smin(self, l: int) -> np.ndarray:
        if l not in self._smin:
            mats, logs = product_stack(self.spec.exterior_generators(l), self.words)
            s = np.linalg.svd(mats, compute_uv=False)[:, -1]
            self._smin[l] = logs + np.log(s)
        return self._smin[l]

    def energies(self, t: np.ndarray) -> np.ndarray:
        e = np.zeros(len(self.words))
        for l, tl in enumerate(t, start=1):
            if tl != 0.0:
                e = e + tl * self.log_norms(l)
        return e


_CACHE: dict = {}


def word_data(spec: CocycleSpec, n: int, cap: int | None = None, shards: int = 1) -> WordData:
    key = (id(spec), n, cap)
    hit = _CACHE.get(key)
    if hit is None or hit.spec is not spec:
        if len(_CACHE) > 64:
            _CACHE.clear()
        hit = WordData(spec, n, cap, shards)
        _CACHE[key] = hit
    return hit


def partition_sum(spec: CocycleSpec, t, n: int, cap: int | None = None, shards: int = 1) -> float:
    """``log sum_{I in L(n)} prod_l ||A^l(I)||^{t_l}``."""
    if n == 0:
        return 0.0
    t = weight_vector(t, spec.k)
    return logsumexp(word_data(spec, n, cap, shards).energies(t))


def block_bound(spec: CocycleSpec, t, n: int, cap: int | None = None, shards: int = 1) -> float:
    """``log(rho(M))/n`` for the boundary-symbol block matrix M described in the module notes."""
    t = weight_vector(t, spec.k)
    wd = word_data(spec, n, cap, shards)
    e = wd.energies(t)
    q = spec.q
    first, last = wd.words[:, 0], wd.words[:, -1]
    top = float(np.max(e))
    B = np.zeros((q, q))
    np.add.at(B, (first, last), np.exp(e - top))
    M = B @ spec.shift.entries.astype(float)
    rho = float(np.max(np.abs(np.linalg.eigvals(M))))
    return (top + math.log(rho)) / n


# ---------------------------------------------------------------- Markov measures


def _pair_counts(words: np.ndarray, q: int) -> np.ndarray:
    """``(N, q*q)`` counts of each transition inside each word."""
    N, n = words.shape
    codes = words[:, :-1] * q + words[:, 1:]
    out = np.zeros((N, q * q))
    for j in range(n - 1):
        np.add.at(out, (np.arange(N), codes[:, j]), 1.0)
    return out


def stationary(P: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eig(P.T)
    i = int(np.argmin(np.abs(w - 1.0)))
    pi = np.abs(np.real(v[:, i]))
    return pi / pi.sum()


def parry_chain(Q: TransitionMatrix) -> np.ndarray:
    """Transition matrix of the measure of maximal entropy."""
    A = Q.entries.astype(float)
    w, v = np.linalg.eig(A)
    i = int(np.argmax(np.real(w)))
    lam = float(np.real(w[i]))
    r = np.abs(np.real(v[:, i]))
    return A * r[None, :] / (lam * r[:, None])


def markov_entropy(P: np.ndarray, pi: np.ndarray) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * np.log(P), 0.0)
    return float(-np.sum(pi[:, None] * terms))


def common_rays(mats: np.ndarray, tol: float = 1e-10) -> list[np.ndarray]:
    """Unit vectors that are real eigenvectors of every matrix in the stack."""
    out = []
    w, V = np.linalg.eig(mats[0])
    for j in range(len(w)):
        if abs(np.imag(w[j])) > tol * max(1.0, abs(w[j])):
            continue
        v = np.real(V[:, j])
        v = v / np.linalg.norm(v)
        ok = True
        for M in mats:
            Mv = M @ v
            lam = float(v @ Mv)
            if np.linalg.norm(Mv - lam * v) > tol * np.linalg.norm(M, 2) or lam == 0.0:
                ok = False
                break
        if ok and not any(abs(abs(float(u @ v)) - 1.0) < 1e-12 for u in out):
            out.append(v)
    return out


class VariationalBound:
    """Lower bounds ``h(mu) + sum_l t_l chi_l`` over Markov and periodic measures."""

    def __init__(self, spec: CocycleSpec, n: int, kappa: float | None = None, cap: int | None = None,
                 shards: int = 1):
        self.spec = spec
        self.n = n
        self.kappa = kappa if (kappa is not None and spec.shift.is_full) else None
        self.wd = word_data(spec, n, cap, shards)
        q = spec.q
        self.support = spec.shift.entries.astype(bool)
        # words sharing first symbol and transition counts carry equal Markov mass
        counts = _pair_counts(self.wd.words, q)
        keys = np.concatenate([self.wd.words[:, :1], counts], axis=1)
        uniq, self.group = np.unique(keys, axis=0, return_inverse=True)
        self.group = self.group.reshape(-1)
        self.first = uniq[:, 0].astype(np.int64)
        self.counts = uniq[:, 1:]
        self.sizes = np.bincount(self.group).astype(float)
        self._sums: dict[tuple[str, int], np.ndarray] = {}
        self._rays: dict[int, list[np.ndarray]] = {}
        self._ray_logs: dict[int, list[np.ndarray]] = {}
        self._periodic: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def _grouped(self, kind: str, l: int) -> np.ndarray:
        key = (kind, l)
        if key not in self._sums:
            vals = self.wd.log_norms(l) if kind == "norm" else self.wd.log_smin(l)
            self._sums[key] = np.bincount(self.group, weights=vals, minlength=len(self.sizes))
        return self._sums[key]

    def ray_exponents(self, l: int) -> list[np.ndarray]:
        """Per-symbol log growth along each common invariant ray at level l."""
        if l not in self._ray_logs:
            mats = self.spec.exterior_generators(l)
            logs = []
            for v in common_rays(mats):
                logs.append(np.array([math.log(abs(float(v @ M @ v))) for M in mats]))
            self._ray_logs[l] = logs
        return self._ray_logs[l]

    def _chain(self, theta: np.ndarray) -> np.ndarray:
        q = self.spec.q
        L = np.full((q, q), -np.inf)
        L[self.support] = theta
        L -= L.max(axis=1, keepdims=True)
        E = np.exp(L)
        return E / E.sum(axis=1, keepdims=True)

    def evaluate(self, P: np.ndarray, t: np.ndarray) -> float:
        """The lower bound delivered by the Markov measure with transition matrix P."""
        pi = stationary(P)
        # admissible words never use transitions outside the support
        logP = np.log(np.where(P > 0, P, 1.0))
        lp = np.log(pi)[self.first] + self.counts @ logP.reshape(-1)
        mu = np.exp(lp)
        mu = mu / (mu @ self.sizes)
        value = markov_entropy(P, pi)
        n = self.n
        for l, tl in enumerate(t, start=1):
            if tl == 0.0:
                continue
            upper_chi = float(mu @ self._grouped("norm", l)) / n
            if tl < 0:
                value += tl * upper_chi
                continue
            cands = [float(mu @ self._grouped("smin", l)) / n]
            for logs in self.ray_exponents(l):
                cands.append(float(pi @ logs))
            if l == 1 and self.kappa is not None:
                cands.append(upper_chi + math.log(self.kappa) / n)
            value += tl * max(cands)
        return value

    def periodic_bound(self, t: np.ndarray) -> float:
        """Best periodic-orbit measure among cyclically admissible words of length <= n."""
        best = -math.inf
        Q = self.spec.shift
        for p in range(1, min(self.n, 12) + 1):
            if p not in self._periodic:
                words = word_array(Q, p)
                cyc = Q.entries[words[:, -1], words[:, 0]].astype(bool)
                words = words[cyc]
                rhos = np.zeros((len(words), self.spec.k))
                for l in range(1, self.spec.k + 1):
                    mats, logs = product_stack(self.spec.exterior_generators(l), words)
                    rad = np.max(np.abs(np.linalg.eigvals(mats)), axis=1)
                    rhos[:, l - 1] = (logs + np.log(rad)) / p
                self._periodic[p] = rhos
            rhos = self._periodic[p]
            if len(rhos):
                best = max(best, float(np.max(rhos @ t)))
        return best

    def best(self, t, starts: Sequence[np.ndarray] = ()) -> tuple[float, np.ndarray | None]:
        t = weight_vector(t, self.spec.k)
        q = self.spec.q
        inits = [parry_chain(self.spec.shift), self.support / self.support.sum(axis=1, keepdims=True)]
        inits.extend(starts)
        # chains that favour one symbol help when an invariant ray dominates
        for s in range(q):
            P = self.support.astype(float).copy()
            P[:, s] *= 4.0
            inits.append(P / P.sum(axis=1, keepdims=True))
        best_val, best_P = -math.inf, None
        for P0 in inits:
            theta0 = np.log(np.clip(P0[self.support], 1e-12, None))
            obj = lambda th: -self.evaluate(self._chain(th), t)
            if len(theta0) > q:
                res = optimize.minimize(obj, theta0, method="Nelder-Mead",
                                        options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 200 * len(theta0)})
                th = res.x
            else:
                th = theta0
            P = self._chain(th)
            val = self.evaluate(P, t)
            if val > best_val:
                best_val, best_P = val, P
        per = self.periodic_bound(t)
        if per > best_val:
            return per, None
        return best_val, best_P


_VCACHE: dict = {}


def variational_bound(spec: CocycleSpec, n: int, kappa: float | None = None, cap: int | None = None,
                      shards: int = 1) -> VariationalBound:
    key = (id(spec), n, kappa, cap)
    hit = _VCACHE.get(key)
    if hit is None or hit.spec is not spec:
        if len(_VCACHE) > 32:
            _VCACHE.clear()
        hit = _VCACHE[key] = VariationalBound(spec, n, kappa, cap, shards)
    return hit


def variational_lower(spec: CocycleSpec, t, n: int, kappa: float | None = None, cap: int | None = None,
                      shards: int = 1) -> float:
    return variational_bound(spec, n, kappa, cap, shards).best(t)[0]


def _qm_lower(spec, t, n, logZ, qm: QuasiMultConstants, cap, shards) -> float | None:
    nz = [l for l, tl in enumerate(t, start=1) if tl != 0.0]
    if not nz:
        logC = 0.0
    elif nz == [qm.level]:
        logC = t[qm.level - 1] * math.log(qm.C)
    else:
        return None
    S = [0.0] + [partition_sum(spec, t, g, cap, shards) for g in range(1, qm.m + 1)]
    return (logZ + logC - logsumexp(np.array(S))) / n


def exponent_floor(spec: CocycleSpec, l: int, n: int, kappa: float | None = None, cap: int | None = None,
                   shards: int = 1) -> float:
    """A lower bound on ``chi_l(mu)`` valid for every invariant measure.

    Uses ``||B^l|| >= |det B|^(l/k)`` (additive along orbits), superadditivity
    of ``log sigma_min``, and with a kappa certificate (level 1, full shift)
    the almost-multiplicative minimum.
    """
    wd = word_data(spec, n, cap, shards)
    k = spec.k
    logdet = np.array([math.log(abs(np.linalg.det(g))) for g in spec.generators])
    cands = [float(np.min(logdet[wd.words].sum(axis=1))) * l / (k * n),
             float(np.min(wd.log_smin(l))) / n]
    if l == 1 and kappa is not None and spec.shift.is_full:
        cands.append((float(np.min(wd.log_norms(1))) + math.log(kappa)) / n)
    return max(cands)


def pressure_bracket(spec: CocycleSpec, t, n: int, qm: QuasiMultConstants | None = None,
                     kappa: float | None = None, certified: bool | None = None,
                     cap: int | None = None, shards: int = 1,
                     variational: bool = True) -> PressureBracket:
    """Bracket ``lower <= P(t) <= upper`` at depth n.

    All weights ``>= 0``: upper from cylinder sums, lower from the best of the
    variational, quasi-multiplicative and kappa bounds.  All weights ``<= 0``:
    cylinder sums become supermultiplicative and give the lower bound; the
    upper bound is ``h_top + sum_l t_l * exponent_floor(l)``.  Mixed signs
    keep the variational lower bound but the upper bound is only the
    cylinder-sum estimate, so the bracket is heuristic; asking for
    ``certified=True`` there raises ``ValueError``.
    """
    tv = weight_vector(t, spec.k)
    nonneg = bool(np.all(tv >= 0))
    nonpos = bool(np.all(tv <= 0))
    if certified and not (nonneg or nonpos):
        raise ValueError("weights of mixed sign cannot be certified; use certified=False (heuristic mode)")
    rigor = CERTIFIED if (nonneg or nonpos) and certified is not False else HEURISTIC
    logZ = partition_sum(spec, tv, n, cap, shards)
    block = block_bound(spec, tv, n, cap, shards)
    lowers: list[tuple[float, str]] = []
    uppers: list[float] = []
    if nonneg:
        uppers += [logZ / n, block]
    if nonpos:
        lowers.append((block, "supermultiplicative"))
        if spec.shift.is_full:
            lowers.append((logZ / n, "supermultiplicative"))
        h = topological_entropy(spec.shift)
        uppers.append(h + sum(tl * exponent_floor(spec, l, n, kappa, cap, shards)
                              for l, tl in enumerate(tv, start=1) if tl != 0.0))
    if not (nonneg or nonpos):
        uppers.append(logZ / n)
    if variational:
        lowers.append((variational_lower(spec, tv, n, kappa, cap, shards), "variational"))
    if nonneg and qm is not None:
        lq = _qm_lower(spec, tv, n, logZ, qm, cap, shards)
        if lq is not None:
            lowers.append((lq, "quasi-multiplicative"))
    if nonneg and kappa is not None and spec.shift.is_full and np.all(tv[1:] == 0):
        lowers.append(((logZ + tv[0] * math.log(kappa)) / n, "kappa"))
    if not lowers:
        lowers.append((-math.inf, "none"))
    lower, source = max(lowers)
    upper = min(uppers)
    # floating-point allowance on both sides
    lower -= ROUNDING * max(1.0, abs(lower))
    upper += ROUNDING * max(1.0, abs(upper))
    if lower > upper:
        slack = 1e-9 * max(1.0, abs(upper))
        if rigor == CERTIFIED and lower - upper > slack:
            raise BracketError(f"lower {lower} exceeds upper {upper} at t={tv}, n={n}")
        # certified overlap is rounding; a heuristic upper may undershoot
        if rigor == CERTIFIED:
            lower = upper
        else:
            upper = lower
    return PressureBracket(tuple(float(x) for x in tv), n, float(lower), float(upper), rigor, source)


# ---------------------------------------------------------------- quasi-multiplicativity


def _words_upto(Q: TransitionMatrix, n_max: int) -> list[np.ndarray]:
    return [word_array(Q, n) for n in range(1, n_max + 1)]


def quasi_mult_search(spec: CocycleSpec, l: int = 1, m_max: int = 2, n_max: int = 4,
                      cap: int | None = None) -> QuasiMultConstants | None:
    """Largest C with a connector ``|K| <= m_max`` for every pair ``|I|, |J| <= n_max``.

    Returns ``None`` if some pair has no admissible connector at all.
    """
    Q = spec.shift
    mats = spec.exterior_generators(l)
    d = mats.shape[1]
    # unit-norm products for every word up to n_max
    words = [w for arr in _words_upto(Q, n_max) for w in arr]
    normed = []
    for w in words:
        m, _ = product_stack(mats, w[None, :])
        normed.append(m[0] / np.linalg.norm(m[0], 2))
    normed = np.array(normed)
    firsts = np.array([w[0] for w in words])
    lasts = np.array([w[-1] for w in words])
    # connectors: empty plus every admissible word up to m_max, raw (unnormalized)
    conns = [((), np.eye(d))]
    for g in range(1, m_max + 1):
        for K in word_array(Q, g):
            m, logs = product_stack(mats, K[None, :])
            conns.append((tuple(int(s) for s in K), m[0] * math.exp(logs[0])))
    best = np.full((len(words), len(words)), -np.inf)
    by_gap = []
    for K, MK in conns:
        if K:
            ok = Q.entries[lasts][:, [K[0]]].astype(bool) & Q.entries[[K[-1]]][:, firsts].astype(bool)
        else:
            ok = Q.entries[lasts][:, firsts].astype(bool)
        if not ok.any():
            by_gap.append(float(np.min(best)))
            continue
        # A(IKJ) = A(J) A(K) A(I)
        left = np.einsum("ab,ibc->iac", MK, normed)  # A(K) A(I)
        prod = np.einsum("jab,ibc->ijac", normed, left)
        vals = np.log(np.linalg.norm(prod.reshape(-1, d, d), ord=2, axis=(1, 2))).reshape(len(words), len(words))
        best = np.where(ok & (vals > best), vals, best)
        by_gap.append(float(np.min(best)))
    if np.isneginf(best).any():
        return None
    # report the shortest gap cap that already achieves the final constant
    final = by_gap[-1]
    m = next(len(K) for (K, _), v in zip(conns, by_gap) if v >= final - 1e-15 * max(1.0, abs(final)))
    return QuasiMultConstants(m, min(math.exp(final), 1.0), n_max, l)


def verify_quasi_mult(spec: CocycleSpec, qm: QuasiMultConstants, n_max: int, slack: float = 1e-12) -> bool:
    """Independent rescan: every pair up to ``n_max`` has a connector meeting ``qm.C``."""
    Q = spec.shift
    mats = spec.exterior_generators(qm.level)

    def lognorm(word):
        m, logs = product_stack(mats, np.array(word)[None, :])
        return float(logs[0] + math.log(np.linalg.norm(m[0], 2)))

    words = [tuple(int(s) for s in w) for arr in _words_upto(Q, n_max) for w in arr]
    conns = [()] + [tuple(int(s) for s in K) for g in range(1, qm.m + 1) for K in word_array(Q, g)]
    cache = {w: lognorm(w) for w in words}
    for I in words:
        for J in words:
            target = math.log(qm.C) + cache[I] + cache[J] - slack
            if not any(Q.is_admissible(I + K + J) and lognorm(I + K + J) >= target for K in conns):
                return False
    return True


# ---------------------------------------------------------------- growth extremes


@dataclass(frozen=True)
class GrowthExtremes:
    n: int
    beta_upper: float
    beta_lower: float
    alpha_upper: float | None
    alpha_lower: float | None
    argmax_word: tuple[int, ...] = field(default=())
    argmin_word: tuple[int, ...] = field(default=())


def growth_extremes(spec: CocycleSpec, n: int, kappa: float | None = None, cap: int | None = None,
                    shards: int = 1) -> GrowthExtremes:
    """Brackets for the top and bottom growth rates from words of length n.

    ``beta_upper`` uses the largest norm, ``beta_lower`` the largest spectral
    radius over cyclically admissible words (periodic points),
    ``alpha_upper`` the smallest norm over cyclically admissible words and
    ``alpha_lower`` the smallest norm over all words corrected by ``log kappa``.
    """
    wd = word_data(spec, n, cap, shards)
    logs = wd.log_norms(1)
    words = wd.words
    Q = spec.shift
    cyc = Q.entries[words[:, -1], words[:, 0]].astype(bool)
    i_max = int(np.argmax(logs))
    beta_upper = float(logs[i_max]) / n
    beta_lower = None
    alpha_upper = None
    i_min_c = None
    if cyc.any():
        mats, scale = product_stack(spec.exterior_generators(1), words[cyc])
        rad = np.max(np.abs(np.linalg.eigvals(mats)), axis=1)
        with np.errstate(divide="ignore"):
            beta_lower = float(np.max(scale + np.log(rad))) / n
        cl = logs[cyc]
        i_min_c = int(np.argmin(cl))
        alpha_upper = float(cl[i_min_c]) / n
    alpha_lower = None
    if kappa is not None:
        alpha_lower = (float(np.min(logs)) + math.log(kappa)) / n
    return GrowthExtremes(
        n, beta_upper, beta_lower if beta_lower is not None else -math.inf, alpha_upper, alpha_lower,
        tuple(int(s) for s in words[i_max]),
        tuple(int(s) for s in words[cyc][i_min_c]) if i_min_c is not None else (),
    )


def connector_gap(Q: TransitionMatrix) -> int | None:
    """Smallest m such that every ordered symbol pair has a connector of length <= m."""
    ok, w = is_primitive(Q)
    if not ok:
        return None
    gap = 0
    for a in range(Q.q):
        for b in range(Q.q):
            K = connector(Q, (a,), (b,), w)
            gap = max(gap, len(K))
    return gap
