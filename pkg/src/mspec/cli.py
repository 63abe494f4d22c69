"""Command-line experiment driver.

    mspec <experiment> --model {complete,chain} --law SPEC --n 250,500 --seeds 1,2,3 --out DIR

Experiments write CSV tables (17 significant digits) plus ``manifest.json``
into ``--out``.  Exit codes: 0 success, 1 I/O failure, 2 bad configuration,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .edge import chain_gap_lower_bound, dense_edge_scaled
from .errors import MspecError, NumericError, ParameterError
from .io import write_csv, write_spectrum
from .kernels import build_chain_kernel_iid, build_complete_kernel, invariant_measure, tv_distance
from .limitlaws import ArcSine, Semicircle, wasserstein_p
from .pathcomb import chain_moment
from .randlaw import PointMass, SeededRng, format_law, normalized_sigma, parse_law
from .spectra import esd, esd_moment, kernel_spectrum
from .walks import trace_identity_check

log = logging.getLogger("mspec")

EXPERIMENTS = ("spectrum", "hist", "converge", "moments", "edge", "invariant", "trace")
MODELS = ("complete", "chain")


@dataclass
class ExperimentConfig:
    experiment: str
    model: str
    law: str
    n: list[int]
    seeds: list[int]
    out: str
    bins: int = 200
    p: list[float] = field(default_factory=lambda: [1.0, 2.0])
    max_ell: int = 6
    jobs: int = 1

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ParameterError(f"unknown experiment {self.experiment!r}")
        if self.model not in MODELS:
            raise ParameterError(f"unknown model {self.model!r}")
        law = parse_law(self.law)
        if not self.n or min(self.n) < 2:
            raise ParameterError("every n must be >= 2")
        if not self.seeds:
            raise ParameterError("at least one seed is required")
        if self.model == "chain":
            lo, hi = law.support
            if lo < 0 or hi > 1:
                raise ParameterError("chain model needs an environment law supported in [0, 1]")
        if self.bins < 1:
            raise ParameterError("bins must be positive")
        if any(p < 1 for p in self.p):
            raise ParameterError("every p must be >= 1")
        if self.max_ell < 0 or self.jobs < 1:
            raise ParameterError("max-ell must be >= 0 and jobs >= 1")
        if self.experiment == "converge":
            if self.model != "complete":
                raise ParameterError("converge compares against the semicircle: complete model only")
            if len(set(self.n)) < 2:
                raise ParameterError("converge needs at least two sizes")
            if normalized_sigma(law) == 0:
                raise ParameterError("converge needs a law with positive variance")
        if self.experiment == "moments" and self.model != "chain":
            raise ParameterError("moments compares against the loop-path formula: chain model only")

    @property
    def law_spec(self):
        return parse_law(self.law)


def _build(cfg: ExperimentConfig, n: int, seed: int):
    law = cfg.law_spec
    rng = SeededRng(seed)
    if cfg.model == "complete":
        return build_complete_kernel(n, law, rng)
    return build_chain_kernel_iid(n, law, rng)


def _plabel(p: float) -> str:
    return format(p, "g")


# -- per-(n, seed) workers: return rows or write a per-pair file ------------


def _pair_spectrum(cfg, n, seed):
    kernel = _build(cfg, n, seed)
    path = Path(cfg.out) / f"spectrum_{cfg.model}_n{n}_seed{seed}.txt"
    write_spectrum(path, kernel_spectrum(kernel))
    return [str(path)]


def _reference(cfg):
    law = cfg.law_spec
    if cfg.model == "complete":
        sigma = normalized_sigma(law)
        return Semicircle(sigma) if sigma > 0 else None
    if isinstance(law, PointMass) and 0 < law.c < 1:
        return ArcSine(2 * math.sqrt(law.c * (1 - law.c)))
    return None


def _pair_hist(cfg, n, seed):
    kernel = _build(cfg, n, seed)
    spec = kernel_spectrum(kernel)
    ref = _reference(cfg)
    if cfg.model == "complete":
        dist = esd(spec, scale=math.sqrt(n), trim_top=True)
        half = 3 * ref.sigma if ref is not None else 1.0
    else:
        dist = esd(spec)
        half = 1.0
    counts, edges = np.histogram(dist.atoms, bins=cfg.bins, range=(-half, half))
    width = edges[1] - edges[0]
    density = counts / (len(dist.atoms) * width)
    mids = 0.5 * (edges[1:] + edges[:-1])
    refd = ref.pdf(mids) if ref is not None else [""] * len(mids)
    out = Path(cfg.out)
    hist_path = out / f"hist_{cfg.model}_n{n}_seed{seed}.csv"
    write_csv(
        hist_path,
        ["bin_left", "bin_right", "count", "density", "reference_density"],
        zip(edges[:-1], edges[1:], counts, density, refd),
    )
    eig_path = out / f"eigenvalues_{cfg.model}_n{n}_seed{seed}.txt"
    write_spectrum(eig_path, spec)
    w1 = wasserstein_p(dist, ref, 1.0) if ref is not None else ""
    return [[n, seed, w1]], [str(hist_path), str(eig_path)]


def _pair_converge(cfg, n, seed):
    kernel = _build(cfg, n, seed)
    spec = kernel_spectrum(kernel)
    ref = _reference(cfg)
    r = math.sqrt(n)
    trimmed = esd(spec, scale=r, trim_top=True)
    full = esd(spec, scale=r)
    lam2, lamn = dense_edge_scaled(kernel, spec)
    tv = tv_distance(invariant_measure(kernel), np.full(n, 1.0 / n))
    row = [
        n,
        seed,
        wasserstein_p(trimmed, ref, 1.0),
        wasserstein_p(trimmed, ref, 2.0),
        wasserstein_p(full, ref, 2.0),
        lam2,
        lamn,
        tv,
    ]
    for p in _extra_ps(cfg):
        row += [wasserstein_p(trimmed, ref, p), wasserstein_p(full, ref, p)]
    return [row], []


def _extra_ps(cfg):
    return [p for p in dict.fromkeys(cfg.p) if p not in (1.0, 2.0)]


def _pair_moments(cfg, n, seed):
    kernel = _build(cfg, n, seed)
    dist = esd(kernel_spectrum(kernel))
    law = cfg.law_spec
    rows = []
    for order in range(1, 13):
        emp = esd_moment(dist, order)
        comb = chain_moment(law, order)
        rows.append([n, seed, order, emp, comb, abs(emp - comb)])
    return rows, []


def _pair_edge(cfg, n, seed):
    kernel = _build(cfg, n, seed)
    spec = kernel_spectrum(kernel)
    if cfg.model == "complete":
        lam2, lamn = dense_edge_scaled(kernel, spec)
        return [[n, seed, normalized_sigma(cfg.law_spec), lam2, lamn]], []
    bound = chain_gap_lower_bound(kernel, 2) if n >= 3 else ""
    return [[n, seed, spec.lam(2), bound]], []


def _pair_invariant(cfg, n, seed):
    kernel = _build(cfg, n, seed)
    pi = invariant_measure(kernel)
    tv = tv_distance(pi, np.full(n, 1.0 / n))
    return [[n, seed, tv, float(np.max(pi) / np.min(pi))]], []


def _pair_trace(cfg, n, seed):
    kernel = _build(cfg, n, seed)
    spec = kernel_spectrum(kernel)
    rows = [[ell, *trace_identity_check(kernel, ell, spec)] for ell in range(cfg.max_ell + 1)]
    path = Path(cfg.out) / f"trace_{cfg.model}_n{n}_seed{seed}.csv"
    write_csv(path, ["ell", "lhs", "rhs", "diff"], rows)
    return [str(path)]


def _run_pairs(cfg: ExperimentConfig, worker: Callable):
    pairs = [(n, s) for n in cfg.n for s in cfg.seeds]
    if cfg.jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(worker, cfg, n, s) for n, s in pairs]
            return [f.result() for f in futures]
    results = []
    for n, s in pairs:
        log.info("%s: n=%d seed=%d", cfg.experiment, n, s)
        results.append(worker(cfg, n, s))
    return results


def _table(cfg, worker, name, header) -> list[str]:
    results = _run_pairs(cfg, worker)
    rows = [row for rs, _ in results for row in rs]
    files = [f for _, fs in results for f in fs]
    path = write_csv(Path(cfg.out) / name, header, rows)
    return [str(path)] + files


def run_spectrum(cfg: ExperimentConfig) -> list[str]:
    return [f for fs in _run_pairs(cfg, _pair_spectrum) for f in fs]


def run_hist(cfg: ExperimentConfig) -> list[str]:
    return _table(cfg, _pair_hist, f"hist_summary_{cfg.model}.csv", ["n", "seed", "W_1_reference"])


def run_converge(cfg: ExperimentConfig) -> list[str]:
    header = ["n", "seed", "W_1_trimmed", "W_2_trimmed", "W_2_untrimmed", "sqrtn_lambda2", "sqrtn_lambdan", "tv_invariant"]
    for p in _extra_ps(cfg):
        header += [f"W_{_plabel(p)}_trimmed", f"W_{_plabel(p)}_untrimmed"]
    return _table(cfg, _pair_converge, "converge.csv", header)


def run_moments(cfg: ExperimentConfig) -> list[str]:
    header = ["n", "seed", "order", "esd_moment", "combinatorial_moment", "abs_diff"]
    return _table(cfg, _pair_moments, "moments.csv", header)


def run_edge(cfg: ExperimentConfig) -> list[str]:
    if cfg.model == "complete":
        header = ["n", "seed", "sigma", "sqrtn_lambda2", "sqrtn_lambdan"]
    else:
        header = ["n", "seed", "lambda2", "bound"]
    return _table(cfg, _pair_edge, f"edge_{cfg.model}.csv", header)


def run_invariant(cfg: ExperimentConfig) -> list[str]:
    header = ["n", "seed", "tv_invariant", "max_min_ratio"]
    return _table(cfg, _pair_invariant, f"invariant_{cfg.model}.csv", header)


def run_trace(cfg: ExperimentConfig) -> list[str]:
    return [f for fs in _run_pairs(cfg, _pair_trace) for f in fs]


RUNNERS = {
    "spectrum": run_spectrum,
    "hist": run_hist,
    "converge": run_converge,
    "moments": run_moments,
    "edge": run_edge,
    "invariant": run_invariant,
    "trace": run_trace,
}


def run(cfg: ExperimentConfig) -> list[str]:
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    files = RUNNERS[cfg.experiment](cfg)
    manifest = {
        "config": asdict(cfg),
        "law_canonical": format_law(cfg.law_spec),
        "version": __version__,
        "seeds": cfg.seeds,
        "outputs": sorted(Path(f).name for f in files),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return files


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mspec", description="Spectra of random reversible Markov kernels.")
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--model", required=True, choices=MODELS)
    ap.add_argument("--law", required=True, help="e.g. uniform:0,2  pointmass:0.5  beta:2,2  uniform2:0,0.25,0.75,1  atom0:0.5,uniform:0,2")
    ap.add_argument("--n", required=True, type=_int_list, help="comma-separated sizes")
    ap.add_argument("--seeds", required=True, type=_int_list, help="comma-separated seeds")
    ap.add_argument("--out", required=True)
    ap.add_argument("--bins", type=int, default=200)
    ap.add_argument("--p", type=_float_list, default=[1.0, 2.0], help="Wasserstein orders for converge")
    ap.add_argument("--max-ell", type=int, default=6, help="largest walk length for trace")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes across (n, seed) pairs")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cfg = ExperimentConfig(
        experiment=args.experiment,
        model=args.model,
        law=args.law,
        n=args.n,
        seeds=args.seeds,
        out=args.out,
        bins=args.bins,
        p=args.p,
        max_ell=args.max_ell,
        jobs=args.jobs,
    )
    try:
        files = run(cfg)
    except NumericError as exc:
        print(f"mspec: numerical failure: {exc}", file=sys.stderr)
        return 3
    except MspecError as exc:
        print(f"mspec: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"mspec: I/O error on {exc.filename or cfg.out}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
