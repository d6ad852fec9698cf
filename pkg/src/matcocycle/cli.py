"""Command-line front end.

Exit status: 0 on success, 1 on an internal error (for example a kappa
certificate that fails its own validation), 2 on invalid input, 3 when a
resource cap is hit.  Tables are CSV; certificates and reports are JSON that
carries the cocycle digest and the package version.  Outputs go to ``--out``
through a temporary file and an atomic rename, or to stdout.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .cocycle import CocycleSpec, SpecError, fiber_bunched, load_spec
from .cones import CertificateError, Cone, ConeDomainError, cone_invariance, domination_check, kappa_certificate
from .pressure import pressure_bracket, quasi_mult_search
from .spectrum import (SpectrumError, gibbs_report, lyapunov_interval, parse_grid, pressure_curve,
                       spectrum_curve, write_gibbs_csv, write_pressure_csv, write_spectrum_csv)
from .subshift import (InadmissibleWordError, ResourceLimitError, count_words, format_word, perron_root,
                       topological_entropy)
from .cocycle import cylinder_norm_table
from .typicality import HomoclinicSpec, PreconditionError, typicality_report

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3
LARGE_T = (8.0, 16.0, 32.0)
WIDTH_WARNING = 0.1
VALUE_OPTIONS = ("--t-grid", "--t", "--eps")


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, text: str) -> None:
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _json(args, spec: CocycleSpec | None, payload: dict) -> str:
    doc = {"version": __version__, "command": args.command}
    if spec is not None:
        doc["spec_hash"] = spec.digest()
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(f"not serializable: {type(x)}")


def _num(x: float) -> float | str:
    """JSON has no infinities; they are written as strings."""
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def parse_cone(text: str, k: int) -> Cone:
    """``orthant``, ``circular:AXIS[:APERTURE]``, ``rays:R1;R2;...`` or a JSON file."""
    if text == "orthant":
        return Cone.orthant(k)
    if text.startswith("circular:"):
        parts = text.split(":")
        axis = [float(v) for v in parts[1].split(",")]
        return Cone.circular(axis, float(parts[2]) if len(parts) > 2 else 1.0)
    if text.startswith("rays:"):
        rays = [[float(v) for v in r.split(",")] for r in text[5:].split(";")]
        return Cone.generated(rays)
    return Cone.from_dict(json.loads(Path(text).read_text()))


def _levels_direction(levels: str | None, k: int) -> np.ndarray:
    d = np.zeros(k)
    for tok in (levels or "1").split(","):
        l = int(tok)
        if not 1 <= l <= k:
            raise ValueError(f"level {l} out of range 1..{k}")
        d[l - 1] = 1.0
    return d


def _qm(args, spec):
    if not getattr(args, "qm_search", None):
        return None
    m_max, n_max = (int(v) for v in args.qm_search.split(":"))
    return quasi_mult_search(spec, 1, m_max, n_max, cap=args.cap)


def _kappa(args, spec):
    if not getattr(args, "kappa_cone", None):
        return None
    return kappa_certificate(spec, parse_cone(args.kappa_cone, spec.k)).kappa


def _depths(text: str) -> list[int]:
    return [int(v) for v in str(text).split(",")]


# ---------------------------------------------------------------- commands


def cmd_entropy(args, spec):
    h = topological_entropy(spec.shift)
    if args.out:
        _emit(args, _json(args, spec, {"h_top": h, "perron_root": perron_root(spec.shift)}))
    else:
        print(repr(h))


def cmd_words(args, spec):
    n = _depths(args.n)[0]
    table = cylinder_norm_table(spec, n, 1, args.cap, args.shards)
    buf = io.StringIO()
    buf.write(f"# {count_words(spec.shift, n)} admissible words of length {n}\n")
    buf.write("word,log_norm\n")
    for w, v in table.items():
        buf.write(f"{format_word(w)},{v!r}\n")
    _emit(args, buf.getvalue())


def cmd_pressure(args, spec):
    n = _depths(args.n)[0]
    curve = pressure_curve(spec, parse_grid(args.t_grid), n, _levels_direction(args.levels, spec.k),
                           qm=_qm(args, spec), kappa=_kappa(args, spec),
                           certified=False if args.heuristic else None, cap=args.cap, shards=args.shards)
    buf = io.StringIO()
    write_pressure_csv(curve, buf)
    _emit(args, buf.getvalue())


def cmd_spectrum(args, spec):
    n = _depths(args.n)[0]
    grid = parse_grid(args.t_grid)
    curve = pressure_curve(spec, grid, n, qm=_qm(args, spec), kappa=_kappa(args, spec),
                           cap=args.cap, shards=args.shards)
    pts = spectrum_curve(spec, grid, n, curve=curve, exact_slope=args.exact_slope, cap=args.cap)
    buf = io.StringIO()
    write_spectrum_csv(pts, buf)
    _emit(args, buf.getvalue())


def cmd_jsr(args, spec):
    n = _depths(args.n)[0]
    kappa = _kappa(args, spec)
    li = lyapunov_interval(spec, n, kappa, args.cap, args.shards)
    _emit(args, _json(args, spec, {
        "n": n, "kappa": kappa,
        "alpha": [_num(x) for x in li.alpha], "beta": [_num(x) for x in li.beta],
        "alpha_certified": li.certified_alpha,
    }))


def cmd_gibbs(args, spec):
    t = [float(v) for v in args.t.split(",")]
    qm = _qm(args, spec)
    reports = [gibbs_report(spec, t, n, qm=qm, kappa=_kappa(args, spec), cap=args.cap, shards=args.shards)
               for n in _depths(args.n)]
    buf = io.StringIO()
    write_gibbs_csv(reports, buf)
    _emit(args, buf.getvalue())


def cmd_kappa(args, spec):
    cert = kappa_certificate(spec, parse_cone(args.cone, spec.k), validation_depth=args.depth)
    _emit(args, _json(args, spec, {"certificate": cert.to_dict()}))


def cmd_check(args, spec):
    what = args.what
    if what == "fiber-bunched":
        flag, margin = fiber_bunched(spec)
        payload = {"fiber_bunched": flag, "margin": margin, "omega": spec.omega, "holder_r": spec.holder_r}
    elif what == "domination":
        rep = domination_check(spec, args.index, _depths(args.n)[0], args.tol if args.tol is not None else 0.05,
                               args.cap)
        payload = {"dominated": rep.dominated, "index": rep.index, "fitted_C": rep.fitted_C,
                   "fitted_tau": rep.fitted_tau, "worst_ratio": rep.worst_ratio}
    elif what == "cone":
        cone = parse_cone(args.cone, spec.k)
        flag, margin = cone_invariance(spec, cone)
        payload = {"invariant": flag, "margin": margin, "cone": cone.to_dict()}
    else:
        h = HomoclinicSpec(args.p_word, args.insert, args.offset)
        rep = typicality_report(spec, h, args.pinch_tol, args.tol if args.tol is not None else 1e-8)
        payload = {"report": rep.to_dict(args.embed_matrices)}
    _emit(args, _json(args, spec, payload))


def perturbed(spec: CocycleSpec, eps: float, seed: int) -> CocycleSpec:
    """``A_i (I + eps E_i)`` with fixed random unit-norm ``E_i`` drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    gens = []
    for A in spec.generators:
        E = rng.normal(size=A.shape)
        E /= np.linalg.norm(E, 2)
        gens.append(A @ (np.eye(spec.k) + eps * E))
    return CocycleSpec(spec.shift, tuple(gens), spec.omega, spec.holder_r)


def perturb_table(spec: CocycleSpec, eps_list, n: int, grid, seed: int = 0, cap=None, shards: int = 1,
                  warn=None) -> list[dict]:
    """Sensitivity of the spectrum curve, the exponent brackets and large-t pressure to perturbations.

    ``spectrum_change`` pairs points by their grid t and takes the largest
    change in either coordinate.
    """
    def measure(s):
        pts = {p.t_source: p for p in spectrum_curve(s, grid, n, cap=cap, shards=shards)}
        li = lyapunov_interval(s, n, None, cap, shards)
        widths = [pressure_bracket(s, t, n, cap=cap, shards=shards).width for t in LARGE_T]
        return pts, li, widths

    base_pts, base_li, _ = measure(spec)
    a0 = 0.5 * sum(base_li.alpha)
    b0 = 0.5 * sum(base_li.beta)
    rows = []
    for eps in eps_list:
        pts, li, widths = measure(perturbed(spec, eps, seed))
        common = sorted(set(pts) & set(base_pts))
        change = max((max(abs(pts[t].alpha - base_pts[t].alpha), abs(pts[t].h - base_pts[t].h))
                      for t in common), default=math.nan)
        a, b = 0.5 * sum(li.alpha), 0.5 * sum(li.beta)
        for t, w in zip(LARGE_T, widths):
            if w > WIDTH_WARNING and warn is not None:
                warn(f"warning: eps={eps:g}: pressure bracket at t={t:g} has width {w:.3g}")
        rows.append({"eps": eps, "spectrum_change": change, "alpha_mid": a, "alpha_diff": abs(a - a0),
                     "beta_mid": b, "beta_diff": abs(b - b0),
                     **{f"width_t{int(t)}": w for t, w in zip(LARGE_T, widths)}})
    return rows


def cmd_perturb(args, spec):
    eps = [float(v) for v in args.eps.split(",")]
    rows = perturb_table(spec, eps, _depths(args.n)[0], parse_grid(args.t_grid), args.seed, args.cap,
                         args.shards, warn=lambda m: print(m, file=sys.stderr))
    buf = io.StringIO()
    cols = list(rows[0]) if rows else ["eps"]
    buf.write(",".join(cols) + "\n")
    for r in rows:
        buf.write(",".join(repr(float(r[c])) for c in cols) + "\n")
    _emit(args, buf.getvalue())


COMMANDS = {
    "entropy": cmd_entropy, "words": cmd_words, "pressure": cmd_pressure, "spectrum": cmd_spectrum,
    "jsr": cmd_jsr, "gibbs": cmd_gibbs, "kappa": cmd_kappa, "check": cmd_check, "perturb": cmd_perturb,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="cocycle spec JSON file")
    common.add_argument("--n", default="10", help="depth (comma list for gibbs)")
    common.add_argument("--t-grid", default="1", help="A:B:STEP or comma list")
    common.add_argument("--levels", default=None, help="exterior levels carrying the weight t, e.g. 1,2")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--shards", type=int, default=1)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--cap", type=int, default=None, help="cap on q**n enumerated words")
    common.add_argument("--qm-search", default=None, metavar="M:NMAX",
                        help="search quasi-multiplicativity constants for lower bounds")
    common.add_argument("--kappa-cone", default=None, help="cone for a kappa certificate used in bounds")

    p = argparse.ArgumentParser(prog="matcocycle", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("entropy", parents=[common], help="topological entropy of the shift")
    sub.add_parser("words", parents=[common], help="cylinder log-norm table")
    sp = sub.add_parser("pressure", parents=[common], help="pressure brackets on a t-grid")
    sp.add_argument("--heuristic", action="store_true", help="allow weights of mixed sign")
    sp = sub.add_parser("spectrum", parents=[common], help="Lyapunov entropy spectrum")
    sp.add_argument("--exact-slope", action="store_true")
    sub.add_parser("jsr", parents=[common], help="brackets for the extreme exponents")
    sp = sub.add_parser("gibbs", parents=[common], help="Gibbs-weight report")
    sp.add_argument("--t", default="1", help="weight vector, comma list")
    sp = sub.add_parser("kappa", parents=[common], help="almost-multiplicativity certificate")
    sp.add_argument("--cone", default="orthant")
    sp.add_argument("--depth", type=int, default=8, help="validation depth")
    sp = sub.add_parser("check", parents=[common], help="structural checks")
    sp.add_argument("what", choices=["fiber-bunched", "domination", "cone", "typical"])
    sp.add_argument("--index", type=int, default=1, help="domination index i")
    sp.add_argument("--cone", default="orthant")
    sp.add_argument("--p-word", default="0")
    sp.add_argument("--insert", default="1")
    sp.add_argument("--offset", type=int, default=0)
    sp.add_argument("--pinch-tol", type=float, default=1e-6)
    sp.add_argument("--embed-matrices", action="store_true")
    sp = sub.add_parser("perturb", parents=[common], help="continuity sweep under perturbations")
    sp.add_argument("--eps", default="1e-2,1e-3")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let values such as "-2:2:0.5" follow their option without "="
    for i in range(len(argv) - 1):
        if argv[i] in VALUE_OPTIONS and argv[i + 1].startswith("-"):
            argv[i:i + 2] = [f"{argv[i]}={argv[i + 1]}", ""]
    args = parser.parse_args([a for a in argv if a != ""])
    try:
        if args.cap is not None and args.cap <= 0:
            raise ValueError("--cap must be positive")
        if args.shards < 1:
            raise ValueError("--shards must be positive")
        spec = load_spec(args.spec)
        COMMANDS[args.command](args, spec)
    except ResourceLimitError as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except SpecError as e:
        print("invalid spec:", file=sys.stderr)
        for problem in e.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_INVALID
    except CertificateError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError, InadmissibleWordError, ConeDomainError, PreconditionError, SpectrumError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
