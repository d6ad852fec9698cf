"""Convex cones, the Hilbert projective metric and almost-multiplicativity.

A cone here is closed, convex and pointed.  Three kinds are supported:

``orthant``
    the nonnegative orthant of R^k;
``generator``
    the cone spanned by finitely many rays (its facets are computed once);
``circular``
    ``{x : ||x - (a.x) a|| <= c (a.x)}`` around a unit axis ``a`` with
    half-aperture ``c`` in (0, 1].

Polyhedral cones give exact Hilbert distances through their facet normals;
circular cones locate boundary crossings with a bracketing root finder.

The kappa certificate follows the constant-cone-field version of the
almost-multiplicativity argument.  With ``D`` the cone spanned by the images
of ``C`` under all generators:

* ``K1`` is the Hilbert diameter of ``D`` inside ``C``;
* ``lambda`` is the largest Birkhoff coefficient ``tanh(Delta_i / 4)`` of a
  generator on ``C``;
* ``K2`` compares the Hilbert metric of ``C`` with the angle metric on ``D``;
* ``K3`` is a Lipschitz constant of ``v -> log(||A_i v|| / ||v||)`` on ``D``
  in the angle metric;
* ``r`` is the angular radius of a ball inside ``D``.

Then ``K4 = K1 K2 K3 / (1 - lambda)``, ``rho = K4 - log(sin(r) / 2)`` and
``kappa = exp(-2 rho - 2 K4)``.  ``K2`` and ``K3`` come from mesh maxima
times a 1.1 safety factor, so no certificate is returned before an
exhaustive check of ``||A(IJ)|| >= kappa ||A(I)|| ||A(J)||`` on short words.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize
from scipy.spatial import ConvexHull

from .cocycle import CocycleSpec, conformal
from .matkernel import product_stack, singular_values
from .subshift import word_array

SAFETY = 1.1
BISECT_TOL = 1e-12


class ConeDomainError(ValueError):
    """A vector passed to a cone routine does not lie in the cone."""


class CertificateError(RuntimeError):
    """The derived kappa failed brute-force validation; nothing is emitted."""


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class Cone:
    kind: str
    dim: int
    axis: np.ndarray | None = None
    aperture: float | None = None
    rays: np.ndarray | None = None
    normals: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def orthant(cls, k: int) -> "Cone":
        return cls("orthant", k, rays=np.eye(k), normals=np.eye(k))

    @classmethod
    def circular(cls, axis, aperture: float = 1.0) -> "Cone":
        if not 0.0 < aperture <= 1.0:
            raise ValueError("half-aperture must lie in (0, 1]")
        a = _unit(axis)
        return cls("circular", len(a), axis=a, aperture=float(aperture))

    @classmethod
    def generated(cls, rays) -> "Cone":
        R = np.atleast_2d(np.asarray(rays, dtype=float))
        R = R / np.linalg.norm(R, axis=1, keepdims=True)
        extreme, normals = _facets(R)
        return cls("generator", R.shape[1], rays=extreme, normals=normals)

    @property
    def polyhedral(self) -> bool:
        return self.kind != "circular"

    def slack(self, v) -> float:
        """Signed distance-like margin: positive inside, zero on the boundary (unit v)."""
        u = _unit(v)
        if self.polyhedral:
            return float(np.min(self.normals @ u))
        ax = float(self.axis @ u)
        return float(self.aperture * ax - np.linalg.norm(u - ax * self.axis)) / math.sqrt(1 + self.aperture**2)

    def contains(self, v, tol: float = 1e-12) -> bool:
        return self.slack(v) >= -tol

    def interior(self, v, tol: float = 1e-12) -> bool:
        return self.slack(v) > tol

    def boundary_rays(self, mesh: int = 64) -> np.ndarray:
        """Extreme rays (polyhedral) or a mesh of boundary rays (circular)."""
        if self.polyhedral:
            return self.rays
        a, c = self.axis, self.aperture
        basis = _complement(a)
        if self.dim == 1:
            return a[None, :]
        if self.dim == 2:
            dirs = np.array([[1.0], [-1.0]])
        else:
            dirs = _sphere_mesh(self.dim - 1, mesh)
        return np.array([_unit(a + c * (basis @ d)) for d in dirs])

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Random interior points (unit vectors)."""
        if self.polyhedral:
            w = rng.dirichlet(np.ones(len(self.rays)), size=count)
            pts = w @ self.rays
        else:
            basis = _complement(self.axis)
            if self.dim == 1:
                return np.tile(self.axis, (count, 1))
            d = rng.normal(size=(count, self.dim - 1))
            d /= np.linalg.norm(d, axis=1, keepdims=True)
            rad = self.aperture * rng.uniform(0, 0.98, size=(count, 1))
            pts = self.axis[None, :] + rad * (d @ basis.T)
        return pts / np.linalg.norm(pts, axis=1, keepdims=True)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "dim": self.dim}
        if self.kind == "circular":
            d.update(axis=self.axis.tolist(), aperture=self.aperture)
        else:
            d.update(rays=self.rays.tolist())
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Cone":
        if d["kind"] == "orthant":
            return cls.orthant(int(d["dim"]))
        if d["kind"] == "circular":
            return cls.circular(d["axis"], d.get("aperture", 1.0))
        if d["kind"] == "generator":
            return cls.generated(d["rays"])
        raise ValueError(f"unknown cone kind {d['kind']!r}")


def _complement(a: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of unit vector a."""
    k = len(a)
    if k == 1:
        return np.zeros((1, 0))
    q, _ = np.linalg.qr(np.column_stack([a, np.eye(k)]))
    return q[:, 1:k]


def _sphere_mesh(dim: int, count: int) -> np.ndarray:
    if dim == 2:
        th = np.linspace(0, 2 * math.pi, count, endpoint=False)
        return np.column_stack([np.cos(th), np.sin(th)])
    rng = np.random.default_rng(12345)
    d = rng.normal(size=(count * dim, dim))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def _facets(R: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Extreme rays and inward unit facet normals of the cone spanned by rows of R."""
    k = R.shape[1]
    if k == 1:
        if np.any(R[:, 0] < 0) and np.any(R[:, 0] > 0):
            raise ValueError("generator cone contains a line")
        s = 1.0 if R[0, 0] > 0 else -1.0
        return np.array([[s]]), np.array([[s]])
    e = _unit(R.sum(axis=0))
    if np.any(R @ e <= 1e-12):
        raise ValueError("generator cone is not pointed (or rays are opposite)")
    U = _complement(e)
    P = R / (R @ e)[:, None]
    Y = P @ U
    if k == 2:
        i, j = int(np.argmin(Y[:, 0])), int(np.argmax(Y[:, 0]))
        if i == j:
            raise ValueError("generator cone has empty interior")
        ext = R[[i, j]]
        normals = []
        for a, b in ((ext[0], ext[1]), (ext[1], ext[0])):
            nrm = np.array([-a[1], a[0]])
            if nrm @ b < 0:
                nrm = -nrm
            normals.append(_unit(nrm))
        return ext, np.array(normals)
    try:
        hull = ConvexHull(Y)
    except Exception as exc:  # qhull raises its own error type
        raise ValueError(f"generator cone has empty interior: {exc}") from exc
    ext = R[np.sort(hull.vertices)]
    normals = []
    for eq in hull.equations:
        a, b = eq[:-1], eq[-1]
        normals.append(_unit(-(U @ a) - b * e))
    normals = np.unique(np.round(np.array(normals), 14), axis=0)
    return ext, normals


# ---------------------------------------------------------------- Hilbert metric


def _circular_g(C: Cone, x: np.ndarray) -> float:
    ax = float(C.axis @ x)
    return C.aperture * ax - float(np.linalg.norm(x - ax * C.axis))


def _largest_feasible(g, tol=BISECT_TOL) -> float:
    """sup{s >= 0 : g(s) >= 0} for concave g with g(0) >= 0 and g -> -inf."""
    hi = 1.0
    while g(hi) >= 0:
        hi *= 2.0
        if hi > 1e300:
            return math.inf
    lo = 0.0
    if g(0.0) < 0:
        return 0.0
    return optimize.brentq(g, lo, hi, xtol=tol * max(1.0, hi), rtol=4 * np.finfo(float).eps) if g(lo) > 0 else 0.0


def _smallest_feasible(h, tol=BISECT_TOL) -> float:
    """inf{s > 0 : h(s) >= 0} for concave h increasing to +inf, or inf if never."""
    hi = 1.0
    while h(hi) < 0:
        hi *= 2.0
        if hi > 1e300:
            return math.inf
    lo = 0.0
    if h(lo) >= 0:
        return 0.0
    return optimize.brentq(h, lo, hi, xtol=tol * max(1.0, hi), rtol=4 * np.finfo(float).eps)


def hilbert_distance(v, w, C: Cone, tol: float = 1e-12) -> tuple[float, float, float]:
    """``(alpha, beta, log(beta/alpha))`` for v, w in C; infinite distance is ``math.inf``."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if not (C.contains(v, tol) and C.contains(w, tol)):
        raise ConeDomainError("both vectors must lie in the cone")
    if C.polyhedral:
        fv = C.normals @ v
        fw = C.normals @ w
        pos = fv > tol * np.linalg.norm(v)
        alpha = float(np.min(fw[pos] / fv[pos])) if pos.any() else math.inf
        alpha = max(alpha, 0.0)
        if np.any(~pos & (fw > tol * np.linalg.norm(w))):
            beta = math.inf
        else:
            beta = float(np.max(fw[pos] / fv[pos])) if pos.any() else 0.0
    else:
        alpha = _largest_feasible(lambda s: _circular_g(C, w - s * v))
        beta = _smallest_feasible(lambda s: _circular_g(C, s * v - w))
    if alpha == 0.0 or beta == math.inf:
        return alpha, beta, math.inf
    return alpha, beta, max(0.0, math.log(beta / alpha))


def angle(v, w) -> float:
    """Angle metric on projective space, in [0, pi/2]."""
    c = abs(float(_unit(v) @ _unit(w)))
    return math.acos(min(1.0, c))


def birkhoff_data(M, C: Cone, mesh: int = 64) -> tuple[float, float]:
    """``(Delta, tanh(Delta/4))`` with Delta the Hilbert diameter of ``M C`` in C."""
    M = np.asarray(M, dtype=float)
    images = np.array([M @ r for r in C.boundary_rays(mesh)])
    if not all(C.interior(u) for u in images):
        return math.inf, 1.0
    diam = 0.0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            diam = max(diam, hilbert_distance(images[i], images[j], C)[2])
    if not C.polyhedral:
        # refine: the supremum may sit between mesh points
        finer = np.array([M @ r for r in C.boundary_rays(4 * mesh)])
        for i in range(len(finer)):
            for j in range(i + 1, len(finer)):
                diam = max(diam, hilbert_distance(finer[i], finer[j], C)[2])
    return diam, (1.0 if math.isinf(diam) else math.tanh(diam / 4))


def cone_invariance(spec: CocycleSpec, C: Cone, mesh: int = 64) -> tuple[bool, float]:
    """Whether every generator maps C into its interior; margin > 0 iff strict.

    The margin is the smallest normalized facet slack (for circular cones,
    the aperture slack) over images of the boundary rays.
    """
    margin = math.inf
    for A in spec.generators:
        for r in C.boundary_rays(mesh):
            margin = min(margin, C.slack(A @ r))
    return margin > 1e-12, float(margin)


# ---------------------------------------------------------------- kappa certificate


@dataclass(frozen=True)
class KappaCertificate:
    cone: dict
    K1: float
    K2: float
    K3: float
    lam: float
    r: float
    K4: float
    rho: float
    kappa: float
    method: str = "cone"
    validation_depth: int = 0
    validation_min_ratio: float = math.nan
    d_rays: list = field(default_factory=list)

    def check_identities(self, rtol: float = 1e-12) -> bool:
        if self.method != "cone":
            return self.kappa == 1.0
        K4 = self.K1 * self.K2 * self.K3 / (1 - self.lam)
        rho = K4 - math.log(0.5 * math.sin(self.r))
        kappa = math.exp(-2 * rho - 2 * K4)
        return (math.isclose(K4, self.K4, rel_tol=rtol, abs_tol=1e-300)
                and math.isclose(rho, self.rho, rel_tol=rtol)
                and math.isclose(kappa, self.kappa, rel_tol=1e-9, abs_tol=0.0))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def pair_ratios(spec: CocycleSpec, depth: int) -> float:
    """min over admissible IJ with ``|I|, |J| <= depth`` of ``||A(IJ)|| / (||A(I)|| ||A(J)||)``."""
    Q = spec.shift
    mats = spec.exterior_generators(1)
    groups = []
    for n in range(1, depth + 1):
        w = word_array(Q, n)
        m, _ = product_stack(mats, w)
        m = m / np.linalg.norm(m, ord=2, axis=(1, 2))[:, None, None]
        groups.append((w[:, 0], w[:, -1], m))
    first = np.concatenate([g[0] for g in groups])
    last = np.concatenate([g[1] for g in groups])
    normed = np.concatenate([g[2] for g in groups])
    worst = math.inf
    N = len(normed)
    chunk = max(1, 200000 // N)
    for s in range(0, N, chunk):
        # rows: I, columns: J; A(IJ) = A(J) A(I)
        prod = np.einsum("jab,ibc->ijac", normed, normed[s:s + chunk])
        vals = np.linalg.norm(prod.reshape(-1, *prod.shape[2:]), ord=2, axis=(1, 2)).reshape(prod.shape[:2])
        ok = Q.entries[last[s:s + chunk]][:, first].astype(bool)
        if ok.any():
            worst = min(worst, float(np.min(vals[ok])))
    return worst


def _mesh_points(D: Cone, rng: np.random.Generator, count: int) -> np.ndarray:
    R = D.rays
    pts = [R]
    for i in range(len(R)):
        for j in range(i + 1, len(R)):
            for s in np.linspace(0.1, 0.9, 9):
                pts.append(((1 - s) * R[i] + s * R[j])[None, :])
    pts.append(D.sample(count, rng))
    P = np.concatenate(pts)
    return P / np.linalg.norm(P, axis=1, keepdims=True)


def _inscribed_radius(D: Cone) -> float:
    """Angular radius of a ball (in the angle metric) contained in polyhedral D."""
    F = D.normals
    k = D.dim
    if k == 1:
        return math.pi / 2
    # maximize s subject to F x >= s, |x_i| <= 1/sqrt(k)
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_ub = np.column_stack([-F, np.ones(len(F))])
    res = optimize.linprog(c, A_ub=A_ub, b_ub=np.zeros(len(F)),
                           bounds=[(-1 / math.sqrt(k), 1 / math.sqrt(k))] * k + [(None, None)])
    v = _unit(res.x[:k])
    return float(np.min(np.arcsin(np.clip(F @ v, -1, 1))))


def kappa_certificate(spec: CocycleSpec, C: Cone, validation_depth: int = 8, mesh: int = 400,
                      seed: int = 0) -> KappaCertificate:
    """Almost-multiplicativity constant ``kappa`` from an invariant cone.

    Conformal generators are exactly multiplicative and get ``kappa = 1``
    without any cone data.  Otherwise C must be polyhedral and mapped into
    its interior by every generator.
    """
    if conformal(spec):
        ratio = pair_ratios(spec, min(validation_depth, 4))
        return KappaCertificate(C.to_dict(), 0.0, 1.0, 0.0, 0.0, math.pi / 2, 0.0, 0.0, 1.0,
                                method="conformal", validation_depth=min(validation_depth, 4),
                                validation_min_ratio=ratio)
    if not C.polyhedral:
        raise ValueError("kappa certificates need a polyhedral (orthant or generator) cone")
    ok, margin = cone_invariance(spec, C)
    if not ok:
        raise ValueError(f"cone is not strictly invariant (margin {margin:.3g})")
    images = np.array([A @ r for A in spec.generators for r in C.rays])
    D = Cone.generated(images)
    # K1: Hilbert balls are convex, so the diameter is attained at extreme rays
    K1 = 0.0
    for i in range(len(D.rays)):
        for j in range(i + 1, len(D.rays)):
            K1 = max(K1, hilbert_distance(D.rays[i], D.rays[j], C)[2])
    lam = max(birkhoff_data(A, C)[1] for A in spec.generators)
    rng = np.random.default_rng(seed)
    pts = _mesh_points(D, rng, mesh)
    # K2: two-sided comparison of Hilbert and angle metrics on D
    ratio = 1.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            da = angle(pts[i], pts[j])
            if da < 1e-9:
                continue
            dh = hilbert_distance(pts[i], pts[j], C)[2]
            ratio = max(ratio, da / dh, dh / da)
    K2 = SAFETY * ratio
    # K3: gradient norm of log||A v|| on the sphere, maximized over D
    grad = 0.0
    for A in spec.generators:
        Av = pts @ A.T
        AtAv = Av @ A
        tang = AtAv - np.sum(AtAv * pts, axis=1, keepdims=True) * pts
        g = np.linalg.norm(tang, axis=1) / np.sum(Av * Av, axis=1)
        grad = max(grad, float(np.max(g)))
    K3 = SAFETY * grad
    r = _inscribed_radius(D)
    K4 = K1 * K2 * K3 / (1 - lam)
    rho = K4 - math.log(0.5 * math.sin(r))
    kappa = math.exp(-2 * rho - 2 * K4)
    worst = pair_ratios(spec, validation_depth)
    if not worst >= kappa:
        raise CertificateError(f"validation failed: ratio {worst} < kappa {kappa}")
    return KappaCertificate(C.to_dict(), K1, K2, K3, lam, r, K4, rho, kappa, "cone",
                            validation_depth, worst, D.rays.tolist())


# ---------------------------------------------------------------- domination


@dataclass(frozen=True)
class DominationReport:
    index: int
    dominated: bool
    fitted_C: float
    fitted_tau: float
    worst_ratio: list


def domination_check(spec: CocycleSpec, i: int, n_max: int = 10, tol: float = 0.05,
                     cap: int | None = None) -> DominationReport:
    """Worst ``sigma_{i+1}/sigma_i`` over words of each length and a log-linear fit.

    Dominated means the fitted rate is below ``1 - tol`` and the worst ratio
    stays below ``1 - tol`` on the second half of the lengths.  This is a
    diagnostic, not a proof.
    """
    k = spec.k
    if not 1 <= i < k:
        raise ValueError(f"index i must satisfy 1 <= i < {k}")
    mats = spec.exterior_generators(1)
    worst = []
    for n in range(1, n_max + 1):
        w = word_array(spec.shift, n, cap)
        m, _ = product_stack(mats, w)
        s = np.linalg.svd(m, compute_uv=False)
        worst.append(float(np.max(s[:, i] / s[:, i - 1])))
    ns = np.arange(1, n_max + 1)
    y = np.log(np.maximum(np.array(worst), 1e-300))
    slope, intercept = np.polyfit(ns, y, 1)
    tau = math.exp(slope)
    tail = np.array(worst[n_max // 2:])
    dominated = bool(tau < 1 - tol and np.all(tail < 1 - tol))
    return DominationReport(i, dominated, math.exp(intercept), tau, worst)


def singular_gap(M, i: int) -> float:
    s = singular_values(M)
    return float(s[i] / s[i - 1])
