"""Command-line pipeline: generate | stats | analytic | verify | sweep.

Every output file starts with a single JSON header line recording the
tool version and the full run configuration, so any file can be
regenerated bit-identically from its own header. Floats are written
with 17 significant digits. Exit codes: 0 success, 1 usage error,
2 numerical failure, 3 verification failure.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .analytic import semicircle, spacing_2x2, wigner_surmise
from .ensemble import ElementPdf, make_rng, sample_symmetric
from .families import (FAMILY_NAMES, construct, diagonalizer, family_spec,
                       fastpath_spectrum, orthogonality_metric,
                       similarity_metric)
from .linalg import ConvergenceError, Spectrum, general_eigen, sym_eigen
from .stats import (DENSITY_RANGE, NLSD_RANGE, UnfoldConfig, density_rescale,
                    ks_distance, make_histogram, poisson_cdf, spacings,
                    unfold, unfold_ensemble, wigner_cdf)
from .verify import (ALGEBRAIC_TOL, SOLVER_TOL, check_pseudo_orthogonality,
                     check_pseudo_symmetry, classify_reality)

USAGE_ERROR, NUMERICAL_ERROR, VERIFY_ERROR = 1, 2, 3


def _fmt(x):
    return f"{float(x):.17g}"


@dataclass
class RunConfig:
    family: str = "q1"
    n: int = 200
    count: int = 1000
    lam: float = 0.9
    mu: float = None
    pdf: str = "gaussian"
    sigma: float = 1.0
    seed: int = 1
    unfold_method: str = "polynomial"
    unfold_degree: int = 7
    unfold_trim: float = 0.02
    unfold_scope: str = "auto"
    bins: int = 50
    threads: int = field(default_factory=lambda: int(os.environ.get("PSRM_THREADS", "1")))

    def spec(self):
        mu = self.mu if self.family.startswith("g") else None
        return family_spec(self.family, self.lam, mu, self.n)

    def element_pdf(self):
        return ElementPdf(self.pdf, self.sigma)

    def unfold_config(self):
        return UnfoldConfig(self.unfold_method, self.unfold_degree, self.unfold_trim)


def _header(command, cfg):
    config = asdict(cfg)
    config.pop("threads", None)  # scheduling detail; output is thread-invariant
    payload = {"tool": "psrm", "version": __version__, "command": command,
               "config": config}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _read_header(line):
    data = json.loads(line)
    return RunConfig(**data["config"])


def _spectrum_line(idx, spectrum):
    parts = [str(idx)]
    if spectrum.real_eigs.size:
        parts.append("," + ",".join(_fmt(v) for v in spectrum.real_eigs))
    if spectrum.complex_pairs.shape[0]:
        pairs = ",".join(f"{_fmt(re)}:{_fmt(im)}" for re, im in spectrum.complex_pairs)
        parts.append(";im_pairs:" + pairs)
    return "".join(parts)


def _parse_spectrum_line(line):
    head, _, tail = line.partition(";")
    fields = head.split(",")
    idx = int(fields[0])
    real = np.array([float(v) for v in fields[1:]]) if len(fields) > 1 else np.empty(0)
    pairs = np.empty((0, 2))
    if tail:
        if not tail.startswith("im_pairs:"):
            raise ValueError(f"malformed spectrum line for index {idx}")
        items = [p.split(":") for p in tail[len("im_pairs:"):].split(",")]
        pairs = np.array([[float(a), float(b)] for a, b in items])
    return idx, Spectrum(np.sort(real), pairs)


def _solve_one(cfg, idx):
    rng = make_rng(cfg.seed, idx)
    m = sample_symmetric(cfg.n, cfg.element_pdf(), rng)
    spec = cfg.spec()
    if spec.real_regime:
        return fastpath_spectrum(spec, m)
    return general_eigen(construct(spec, m))


def cmd_generate(cfg, out_path):
    lines = [None] * cfg.count
    failures = []

    def work(idx):
        try:
            return idx, _spectrum_line(idx, _solve_one(cfg, idx))
        except ConvergenceError as exc:
            return idx, exc

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(work, range(cfg.count)))
    else:
        results = [work(i) for i in range(cfg.count)]
    for idx, res in sorted(results, key=lambda t: t[0]):
        if isinstance(res, ConvergenceError):
            failures.append(idx)
            print(f"solver failure at matrix {idx}: {res}", file=sys.stderr)
        else:
            lines[idx] = res
    with open(out_path, "w") as fh:
        fh.write(_header("generate", cfg) + "\n")
        for line in lines:
            if line is not None:
                fh.write(line + "\n")
    if failures:
        print(f"{len(failures)} of {cfg.count} matrices failed", file=sys.stderr)
        return NUMERICAL_ERROR
    return 0


def read_spectra(path):
    with open(path) as fh:
        first = fh.readline().strip()
        cfg = _read_header(first)
        records = [_parse_spectrum_line(ln.strip()) for ln in fh if ln.strip()]
    return cfg, records


def _write_histogram(path, command, cfg, hist):
    with open(path, "w") as fh:
        fh.write(_header(command, cfg) + "\n")
        for lo, hi, d in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.densities):
            fh.write(f"{_fmt(lo)},{_fmt(hi)},{_fmt(d)}\n")


def nlsd_spacings(records, ucfg, scope="auto"):
    """Pooled unfolded spacings over the records' real eigenvalues.

    scope 'per-matrix' fits each spectrum's own staircase (spectra with
    fewer than degree+2 retained levels are skipped and counted);
    'ensemble' fits one staircase to the pooled levels, which is the
    robust choice for the sparse real subsets of the mixed regime;
    'auto' selects per-matrix when every spectrum is fully real,
    ensemble otherwise.
    """
    reals = [spec.real_eigs for _, spec in records]
    if scope == "auto":
        mixed = any(spec.complex_pairs.shape[0] for _, spec in records)
        scope = "ensemble" if mixed else "per-matrix"
    skipped = 0
    if scope == "per-matrix":
        unfolded = []
        for lv in reals:
            try:
                unfolded.append(unfold(lv, ucfg))
            except ValueError:
                skipped += 1
    else:
        usable = [lv for lv in reals if lv.size >= 2]
        skipped = len(reals) - len(usable)
        unfolded = unfold_ensemble(usable, ucfg)
    return spacings(unfolded), skipped, scope


def cmd_stats(in_path, cfg_over, nlsd_out, density_out, summary_out):
    cfg, records = read_spectra(in_path)
    if cfg_over is not None:
        for name in ("unfold_method", "unfold_degree", "unfold_trim",
                     "unfold_scope", "bins"):
            setattr(cfg, name, getattr(cfg_over, name))
    if not records:
        raise ValueError("spectra file holds no records")
    ucfg = cfg.unfold_config()
    sample, skipped, scope = nlsd_spacings(records, ucfg, cfg.unfold_scope)
    if sample.values.size == 0:
        raise ValueError("no unfolded spacings; spectra too sparse")
    nlsd_hist = make_histogram(sample.values, cfg.bins, NLSD_RANGE)
    pool = np.concatenate([spec.real_eigs for _, spec in records])
    dens_hist = make_histogram(density_rescale(pool), cfg.bins, DENSITY_RANGE)
    fractions = [classify_reality(spec).fraction_real for _, spec in records]
    summary = {
        "records": len(records),
        "unfold_scope": scope,
        "skipped_matrices": skipped,
        "spacing_count": int(sample.values.size),
        "spacing_mean": float(sample.values.mean()),
        "reality_fraction_mean": float(np.mean(fractions)),
        "ks_vs_wigner": ks_distance(sample.values, wigner_cdf),
        "ks_vs_poisson": ks_distance(sample.values, poisson_cdf),
        "nlsd_out_of_range": nlsd_hist.n_out_of_range,
        "density_out_of_range": dens_hist.n_out_of_range,
    }
    if nlsd_out:
        _write_histogram(nlsd_out, "stats:nlsd", cfg, nlsd_hist)
    if density_out:
        _write_histogram(density_out, "stats:density", cfg, dens_hist)
    payload = json.dumps(summary, sort_keys=True, indent=2)
    if summary_out:
        with open(summary_out, "w") as fh:
            fh.write(payload + "\n")
    print(payload)
    return 0


def cmd_analytic(curve, lo, hi, points, lam, out_path, cfg):
    if not lo < hi or points < 2:
        raise ValueError("grid requires lo < hi and points >= 2")
    xs = np.linspace(lo, hi, points)
    if curve == "wigner":
        ys = wigner_surmise(xs)
    elif curve == "semicircle":
        ys = semicircle(xs)
    else:
        if lam is None or lam == 0:
            raise ValueError("spacing2x2 requires a nonzero --lambda")
        ys = spacing_2x2(xs, lam)
    with open(out_path, "w") as fh:
        fh.write(_header(f"analytic:{curve}", cfg) + "\n")
        for x, y in zip(xs, ys):
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")
    return 0


def _verify_family(cfg, name, inject_fault=False):
    mu = (cfg.mu if cfg.mu is not None else cfg.lam) if name.startswith("g") else None
    spec = family_spec(name, cfg.lam, mu, cfg.n)
    pdf = cfg.element_pdf()
    ps_max = po_max = fp_max = 0.0
    po_checked = 0
    pairs_seen = 0
    fractions = []
    for i in range(cfg.count):
        rng = make_rng(cfg.seed, i)
        m = sample_symmetric(cfg.n, pdf, rng)
        h = construct(spec, m)
        if inject_fault:
            h = h.copy()
            h[0, 1] += 1e-3
        rep = check_pseudo_symmetry(h, similarity_metric(spec))
        ps_max = max(ps_max, rep.residual / max(rep.scale, 1e-300))
        if abs(abs(spec.lam) - abs(spec.mu)) < 1e-15:
            _, d = sym_eigen(m)
            rep = check_pseudo_orthogonality(diagonalizer(spec, d),
                                             orthogonality_metric(spec))
            po_max = max(po_max, rep.residual / max(rep.scale, 1e-300))
            po_checked += 1
        sp = general_eigen(h)
        reality = classify_reality(sp)
        fractions.append(reality.fraction_real)
        if reality.n_pairs:
            pairs_seen += 1
        if spec.real_regime:
            fast = fastpath_spectrum(spec, m).real_eigs
            if reality.n_pairs == 0 and fast.size == sp.real_eigs.size:
                scale = max(np.max(np.abs(fast)), 1e-300)
                fp_max = max(fp_max, float(np.max(np.abs(fast - sp.real_eigs)) / scale))
            else:
                fp_max = math.inf
    checks = {
        "pseudo_symmetry": {"max_relative_residual": ps_max,
                            "tol": ALGEBRAIC_TOL, "passed": ps_max <= ALGEBRAIC_TOL},
        "pseudo_orthogonality": {"max_relative_residual": po_max,
                                 "tol": SOLVER_TOL, "instances": po_checked,
                                 "passed": po_max <= SOLVER_TOL},
    }
    if spec.real_regime:
        checks["fastpath_vs_general"] = {"max_relative_diff": fp_max, "tol": 1e-8,
                                         "passed": fp_max <= 1e-8}
        checks["reality_regime"] = {"complex_pair_instances": pairs_seen,
                                    "passed": pairs_seen == 0}
    else:
        mean_frac = float(np.mean(fractions))
        checks["reality_regime"] = {"complex_pair_instances": pairs_seen,
                                    "mean_fraction_real": mean_frac,
                                    "passed": pairs_seen > 0 and 0.0 < mean_frac < 1.0}
    return checks


def cmd_verify(cfg, family, out_path, inject_fault):
    names = FAMILY_NAMES if family == "all" else (family,)
    report = {"config": asdict(cfg), "families": {}}
    ok = True
    for name in names:
        checks = _verify_family(cfg, name, inject_fault)
        report["families"][name] = checks
        ok = ok and all(c["passed"] for c in checks.values())
    report["passed"] = ok
    payload = json.dumps(report, sort_keys=True, indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload + "\n")
    print(payload)
    return 0 if ok else VERIFY_ERROR


def cmd_sweep(cfg, lam_grid, mu_grid, out_path):
    rows = []
    ucfg = cfg.unfold_config()
    for lam in lam_grid:
        for mu in mu_grid:
            spec = family_spec(cfg.family, lam,
                               mu if cfg.family.startswith("g") else None, cfg.n)
            records = []
            for i in range(cfg.count):
                rng = make_rng(cfg.seed, i)
                m = sample_symmetric(cfg.n, cfg.element_pdf(), rng)
                records.append((i, general_eigen(construct(spec, m))))
            fractions = [classify_reality(s).fraction_real for _, s in records]
            try:
                sample, _, _ = nlsd_spacings(records, ucfg, cfg.unfold_scope)
                ks = ks_distance(sample.values, wigner_cdf)
            except ValueError:
                ks = float("nan")
            rows.append((lam, spec.mu, float(np.mean(fractions)), ks))
    with open(out_path, "w") as fh:
        fh.write(_header("sweep", cfg) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser():
    p = _Parser(prog="psrm",
                description="Pseudo-symmetric random matrix ensembles and "
                            "their spectral statistics.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, with_family=True):
        if with_family:
            sp.add_argument("--family", choices=FAMILY_NAMES, default="q1")
        sp.add_argument("--n", type=int, default=200)
        sp.add_argument("--count", type=int, default=1000)
        sp.add_argument("--lambda", dest="lam", type=float, default=0.9)
        sp.add_argument("--mu", type=float, default=None)
        sp.add_argument("--pdf", choices=("gaussian", "uniform"), default="gaussian")
        sp.add_argument("--sigma", type=float, default=1.0)
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--threads", type=int,
                        default=int(os.environ.get("PSRM_THREADS", "1")))

    def add_unfold(sp):
        sp.add_argument("--unfold-method", choices=("polynomial", "semicircle"),
                        default="polynomial")
        sp.add_argument("--degree", type=int, default=7)
        sp.add_argument("--trim", type=float, default=0.02)
        sp.add_argument("--unfold-scope", choices=("auto", "per-matrix", "ensemble"),
                        default="auto")
        sp.add_argument("--bins", type=int, default=50)

    g = sub.add_parser("generate", help="sample an ensemble and write spectra")
    add_common(g)
    g.add_argument("--out", required=True)

    s = sub.add_parser("stats", help="histograms and summary from a spectra file")
    s.add_argument("--in", dest="in_path", required=True)
    add_unfold(s)
    s.add_argument("--nlsd-out")
    s.add_argument("--density-out")
    s.add_argument("--summary-out")

    a = sub.add_parser("analytic", help="tabulate a closed-form curve")
    a.add_argument("--curve", choices=("wigner", "semicircle", "spacing2x2"),
                   required=True)
    a.add_argument("--lo", type=float, required=True)
    a.add_argument("--hi", type=float, required=True)
    a.add_argument("--points", type=int, default=401)
    a.add_argument("--lambda", dest="lam", type=float, default=None)
    a.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run the identity checks")
    v.add_argument("--family", choices=FAMILY_NAMES + ("all",), default="all")
    v.add_argument("--n", type=int, default=50)
    v.add_argument("--count", type=int, default=100)
    v.add_argument("--lambda", dest="lam", type=float, default=0.9)
    v.add_argument("--mu", type=float, default=None)
    v.add_argument("--pdf", choices=("gaussian", "uniform"), default="gaussian")
    v.add_argument("--sigma", type=float, default=1.0)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--out")
    v.add_argument("--inject-fault", action="store_true",
                   help="perturb H to prove the checks can fail")

    w = sub.add_parser("sweep", help="reality fraction over a (lambda, mu) grid")
    w.add_argument("--family", choices=FAMILY_NAMES, default="gq1")
    w.add_argument("--lambda-grid", required=True,
                   help="comma-separated lambda values")
    w.add_argument("--mu-grid", required=True, help="comma-separated mu values")
    w.add_argument("--n", type=int, default=50)
    w.add_argument("--count", type=int, default=200)
    w.add_argument("--pdf", choices=("gaussian", "uniform"), default="gaussian")
    w.add_argument("--sigma", type=float, default=1.0)
    w.add_argument("--seed", type=int, default=1)
    add_unfold(w)
    w.add_argument("--out", required=True)
    return p


def _config_from_args(args, **overrides):
    fields = {}
    for name in ("family", "n", "count", "lam", "mu", "pdf", "sigma", "seed",
                 "threads"):
        if hasattr(args, name) and getattr(args, name) is not None:
            fields[name] = getattr(args, name)
    for src, dst in (("unfold_method", "unfold_method"), ("degree", "unfold_degree"),
                     ("trim", "unfold_trim"), ("unfold_scope", "unfold_scope"),
                     ("bins", "bins")):
        if hasattr(args, src):
            fields[dst] = getattr(args, src)
    fields.update(overrides)
    return RunConfig(**fields)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            cfg = _config_from_args(args)
            cfg.spec()  # validate family / parameters up front
            return cmd_generate(cfg, args.out)
        if args.command == "stats":
            cfg_over = _config_from_args(args, family="q1")
            return cmd_stats(args.in_path, cfg_over, args.nlsd_out,
                             args.density_out, args.summary_out)
        if args.command == "analytic":
            cfg = RunConfig(lam=args.lam if args.lam is not None else 0.9)
            return cmd_analytic(args.curve, args.lo, args.hi, args.points,
                                args.lam, args.out, cfg)
        if args.command == "verify":
            cfg = _config_from_args(args)
            if cfg.family.startswith("g") and cfg.mu is None:
                cfg.mu = cfg.lam
            return cmd_verify(cfg, args.family, args.out, args.inject_fault)
        if args.command == "sweep":
            lam_grid = [float(v) for v in args.lambda_grid.split(",") if v]
            mu_grid = [float(v) for v in args.mu_grid.split(",") if v]
            if not lam_grid or not mu_grid:
                raise ValueError("grids must be nonempty")
            cfg = _config_from_args(args)
            return cmd_sweep(cfg, lam_grid, mu_grid, args.out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
