"""The eleven acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import csv
import itertools
import json
import math
import time
from pathlib import Path

import numpy as np

from matcocycle import cli
from matcocycle.cocycle import CocycleSpec, butler, golden_mean, identity_cocycle, positive_pair, rotation, save_spec
from matcocycle.cocycle import fiber_bunched
from matcocycle.cones import Cone, birkhoff_data, hilbert_distance, kappa_certificate
from matcocycle.matkernel import exterior_power, singular_values
from matcocycle.pressure import growth_extremes, pressure_bracket, quasi_mult_search
from matcocycle.spectrum import concavity_violations, gibbs_report, lyapunov_interval, pressure_curve, spectrum_curve
from matcocycle.subshift import TransitionMatrix

LOG2 = math.log(2.0)


def binary_entropy(p: float) -> float:
    return -sum(x * math.log(x) for x in (p, 1 - p) if x > 0)


def test_criterion_01_butler_pressure(record):
    spec = butler(2.0)
    start = time.perf_counter()
    b1 = pressure_bracket(spec, 1.0, 14)
    b0 = pressure_bracket(spec, 0.0, 14)
    elapsed = time.perf_counter() - start
    ok = (b1.contains(math.log(2.5)) and b1.width <= 0.08 and b0.contains(LOG2)
          and b0.width <= 1e-6 and elapsed <= 10.0)
    record(1, ok, f"P(1) in [{b1.lower:.6f}, {b1.upper:.6f}] width {b1.width:.4f}; "
                  f"P(0) width {b0.width:.2e}; {elapsed:.2f}s")
    assert ok


def test_criterion_02_butler_spectrum(record):
    spec = butler(2.0)
    grid = np.arange(-8.0, 8.0 + 1e-9, 0.25)
    start = time.perf_counter()
    curve = pressure_curve(spec, grid, 14)
    pts = spectrum_curve(spec, grid, 14, curve=curve)
    elapsed = time.perf_counter() - start
    errs = [abs(p.h - binary_entropy((1 + p.alpha / LOG2) / 2)) for p in pts if 0.05 <= p.alpha <= 0.6]
    sup_err = max(errs)
    end = max(pts, key=lambda p: p.alpha)
    violations = concavity_violations(pts)
    ok = (len(errs) >= 5 and sup_err <= 0.05 and abs(end.alpha - LOG2) <= 1e-3 and end.h <= 0.05
          and not violations and elapsed <= 60.0)
    record(2, ok, f"sup error {sup_err:.4f} over {len(errs)} points; endpoint alpha {end.alpha:.6f} "
                  f"h {end.h:.4f}; concavity violations {len(violations)}; {elapsed:.1f}s")
    assert ok


def test_criterion_03_jsr_exactness(record):
    spec = butler(2.0)
    worst_beta = worst_alpha = 0.0
    for n in range(1, 15):
        g = growth_extremes(spec, n)
        worst_beta = max(worst_beta, abs(g.beta_upper - LOG2))
        if n % 2 == 0:
            worst_alpha = max(worst_alpha, abs(g.alpha_upper))
    ok = worst_beta <= 1e-12 and worst_alpha <= 1e-12
    record(3, ok, f"max |beta_upper - log 2| = {worst_beta:.1e}; max |alpha_upper| (even n) = {worst_alpha:.1e}")
    assert ok


def test_criterion_04_identity_degeneracy(record):
    spec = identity_cocycle(golden_mean())
    target = math.log((1 + math.sqrt(5)) / 2)
    dev = 0.0
    for t in (-2.0, 0.0, 3.0):
        b = pressure_bracket(spec, t, 14)
        dev = max(dev, abs(b.lower - target), abs(b.upper - target))
    li = lyapunov_interval(spec, 14)
    spread = max(abs(x) for x in li.alpha + li.beta)
    ok = dev <= 1e-9 and spread <= 1e-12
    record(4, ok, f"max bracket deviation from log(phi) {dev:.1e}; Lyapunov interval spread {spread:.1e}")
    assert ok


def _all_products(mats, depth):
    """Raw products A(I) for every word of length 1..depth on the full shift (independent oracle)."""
    out = []
    layer = [np.eye(mats[0].shape[0])]
    for _ in range(depth):
        layer = [A @ P for P in layer for A in mats]
        out.extend(layer)
    return np.array(out)


def test_criterion_05_kappa_gate(record):
    spec = positive_pair()
    start = time.perf_counter()
    cert = kappa_certificate(spec, Cone.orthant(2), validation_depth=8)
    elapsed = time.perf_counter() - start
    prods = _all_products(list(spec.generators), 8)
    norms = np.linalg.norm(prods, 2, axis=(1, 2))
    worst = math.inf
    for i in range(0, len(prods), 64):
        block = np.einsum("jab,ibc->ijac", prods, prods[i:i + 64])
        pn = np.linalg.norm(block.reshape(-1, 2, 2), 2, axis=(1, 2)).reshape(block.shape[:2])
        worst = min(worst, float(np.min(pn / (norms[i:i + 64, None] * norms[None, :]))))
    widths = []
    for n in (6, 8, 10):
        li = lyapunov_interval(spec, n, kappa=cert.kappa)
        widths.append(abs((li.alpha[1] - li.alpha[0]) - (-math.log(cert.kappa) / n)))
    ok = (0 < cert.kappa <= 1 and worst >= cert.kappa and max(widths) <= 1e-12
          and cert.check_identities() and elapsed <= 60.0)
    record(5, ok, f"kappa {cert.kappa:.4e}; brute-force min ratio {worst:.4f} over {len(prods)}^2 pairs; "
                  f"width identity error {max(widths):.1e}; {elapsed:.1f}s")
    assert ok


def test_criterion_06_birkhoff_contraction(record):
    rng = np.random.default_rng(2024)
    C = Cone.orthant(3)
    violations = checks = 0
    worst = -math.inf
    for _ in range(20):
        M = rng.uniform(0.05, 1.0, size=(3, 3))
        delta, coeff = birkhoff_data(M, C)
        assert math.isfinite(delta)
        V = rng.dirichlet(np.ones(3), size=1000) + 1e-6
        W = rng.dirichlet(np.ones(3), size=1000) + 1e-6
        for v, w in zip(V, W):
            d = hilbert_distance(v, w, C)[2]
            dm = hilbert_distance(M @ v, M @ w, C)[2]
            excess = dm - (coeff * d + 1e-9)
            worst = max(worst, excess)
            violations += excess > 0
            checks += 1
    ok = violations == 0
    record(6, ok, f"{violations} violations in {checks} checks; max excess {worst:.2e}")
    assert ok


def test_criterion_07_exterior_identities(record):
    rng = np.random.default_rng(7)
    norm_err = func_err = 0.0
    for _ in range(100):
        k = int(rng.integers(1, 6))
        M = rng.normal(size=(k, k))
        N = rng.normal(size=(k, k))
        s = singular_values(M)
        for l in range(1, k + 1):
            E = exterior_power(M, l)
            norm_err = max(norm_err, abs(np.linalg.norm(E, 2) - np.prod(s[:l])) / np.prod(s[:l]))
            lhs = exterior_power(M @ N, l)
            rhs = E @ exterior_power(N, l)
            func_err = max(func_err, np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs))))
    ok = norm_err <= 1e-9 and func_err <= 1e-9
    record(7, ok, f"max relative norm error {norm_err:.1e}; max functoriality error {func_err:.1e}")
    assert ok


def test_criterion_08_gibbs_consistency(record):
    spec = positive_pair()
    qm = quasi_mult_search(spec, 1, 0, 6)
    inside = True
    ratios = []
    for n in (8, 10, 12):
        rep = gibbs_report(spec, 1.0, n, qm=qm)
        b = pressure_bracket(spec, 1.0, n, qm=qm)
        inside &= b.contains(rep.h_n + rep.chi_n[0], tol=1e-12)
        ratios.append(rep.gibbs_ratio_bound)
    spread = max(ratios) / min(ratios)
    ok = inside and spread <= 2.0
    record(8, ok, f"h_n + chi_n inside bracket at all n: {inside}; ratio bounds "
                  f"{', '.join(f'{r:.4f}' for r in ratios)} (spread {spread:.3f})")
    assert ok


def test_criterion_09_typicality_flags(record, tmp_path):
    specs = {
        "diag_rotation": (CocycleSpec(TransitionMatrix.full(2), (np.diag([2.0, 0.5]), rotation(1.0))), True),
        "butler": (butler(2.0), False),
        "identity": (identity_cocycle(TransitionMatrix.full(2)), False),
    }
    got = {}
    for name, (spec, _) in specs.items():
        path = tmp_path / f"{name}.json"
        out = tmp_path / f"{name}.out.json"
        save_spec(spec, path)
        code = cli.main(["check", "typical", "--spec", str(path), "--p-word", "0", "--insert", "1",
                         "--offset", "0", "--out", str(out)])
        assert code == 0
        got[name] = json.loads(out.read_text())["report"]["typical"]
    ok = all(got[name] is expected for name, (_, expected) in specs.items())
    record(9, ok, "; ".join(f"{name}={got[name]}" for name in specs))
    assert ok


def test_criterion_10_fiber_bunching(record):
    flags = {s: fiber_bunched(butler(s, 0.5, 1.0))[0] for s in (1.2, 1.4, 1.42, 2.0)}
    ok = all(flags[s] == (s * s < 2) for s in flags)
    record(10, ok, "; ".join(f"sigma={s}: {f}" for s, f in flags.items()))
    assert ok


def test_criterion_11_perturbation_monotone(record, tmp_path):
    path = tmp_path / "pp.json"
    out = tmp_path / "perturb.csv"
    save_spec(positive_pair(), path)
    code = cli.main(["perturb", "--spec", str(path), "--n", "10", "--t-grid", "-2:4:0.5",
                     "--eps", "1e-2,1e-3", "--out", str(out)])
    assert code == 0
    rows = {float(r["eps"]): r for r in csv.DictReader(out.open())}
    big, small = rows[1e-2], rows[1e-3]
    ds = (float(big["spectrum_change"]), float(small["spectrum_change"]))
    da = (float(big["alpha_diff"]), float(small["alpha_diff"]))
    ok = ds[1] < ds[0] and da[1] < da[0]
    record(11, ok, f"spectrum change {ds[0]:.2e} -> {ds[1]:.2e}; alpha difference {da[0]:.2e} -> {da[1]:.2e}")
    assert ok
