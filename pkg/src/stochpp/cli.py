"""Command-line front end.

    stochpp run --model survey --variant stochastic --sampler mhmc \\
        --data answers.csv --samples 1000 --seed 1 --out runs/mhmc
    stochpp compare runs/hmc/samples.csv runs/mhmc/samples.csv

``run`` writes ``samples.csv`` and ``summary.json`` into ``--out`` (and
prints the summary); ``compare`` checks that two sample files agree in
posterior means and exits 0 only if every dimension passes.
"""

import argparse
import csv
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .diagnostics import compare_runs, summarize
from .errors import DomainError, SamplerError
from .models import (
    BallDeterministic,
    BallParams,
    BallStochastic,
    GmmData,
    GmmDeterministic,
    GmmStochastic,
    MarkovCoins,
    SurveyBlackbox,
    SurveyDeterministic,
    SurveyStochastic,
    load_column,
    relabel_by_mean,
)
from .samplers import HmcConfig, SampleBatch, SghmcConfig, run_chains

log = logging.getLogger("stochpp")

MODELS = ("survey", "ball", "gmm")
VARIANTS = ("stochastic", "deterministic", "blackbox")
SAMPLERS = ("hmc", "sghmc", "mhmc")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    model: str
    variant: str
    sampler: str
    step_size: float = 0.01
    n_leapfrog: int = 10
    friction: float = 1.0
    mass: float = 1.0
    n_draws: Optional[int] = None
    chains: int = 1
    samples: int = 1000
    burnin: int = 100
    thin: int = 1
    seed: int = 0
    data_path: Optional[str] = None
    out_path: Optional[str] = None
    prior: bool = False
    n_comp: int = 2
    vw: float = 8.0
    vs: float = 10.0
    distance: float = 8.0
    coin_stay: float = 0.9
    init: Optional[list] = None
    record_time: bool = False


def _semantics(model, variant):
    if variant == "deterministic":
        return "deterministic"
    return "nondeterminism" if model == "ball" else "marginalization"


def validate(cfg):
    if cfg.variant == "blackbox" and cfg.model != "survey":
        raise UsageError("blackbox variant exists only for the survey model")
    sem = _semantics(cfg.model, cfg.variant)
    if cfg.sampler == "hmc" and sem != "deterministic":
        raise UsageError("hmc requires deterministic variant")
    if cfg.sampler != "hmc" and sem == "deterministic":
        raise UsageError(f"{cfg.sampler} requires a stochastic variant")
    if cfg.sampler == "sghmc" and sem != "nondeterminism":
        raise UsageError("sghmc requires a nondeterminism model (ball stochastic)")
    if cfg.sampler == "mhmc" and sem != "marginalization":
        raise UsageError("mhmc requires a marginalization model (survey or gmm stochastic)")
    if cfg.model in ("survey", "gmm") and not cfg.data_path:
        raise UsageError(f"--data is required for the {cfg.model} model")
    for name in ("step_size", "mass"):
        if not getattr(cfg, name) > 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    for name in ("n_leapfrog", "chains", "samples", "thin"):
        if getattr(cfg, name) < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be at least 1")
    if cfg.burnin < 0 or cfg.friction < 0:
        raise UsageError("--burnin and --friction must be non-negative")
    if cfg.n_draws is not None and cfg.n_draws < 1:
        raise UsageError("--n-draws must be at least 1")
    return cfg


def _floats(text):
    return [float(v) for v in text.split(",")]


def build_parser():
    p = argparse.ArgumentParser(prog="stochpp", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="sample a model's posterior")
    r.add_argument("--model", choices=MODELS, required=True)
    r.add_argument("--variant", choices=VARIANTS, required=True)
    r.add_argument("--sampler", choices=SAMPLERS, required=True)
    r.add_argument("--step-size", type=float, default=0.01)
    r.add_argument("--n-leapfrog", type=int, default=10)
    r.add_argument("--friction", type=float, default=1.0)
    r.add_argument("--mass", type=float, default=1.0)
    r.add_argument("--n-draws", type=int, default=None,
                   help="nuisance draws per gradient (default 10 for mhmc, 1 for sghmc)")
    r.add_argument("--chains", type=int, default=1)
    r.add_argument("--samples", type=int, default=1000)
    r.add_argument("--burnin", type=int, default=100)
    r.add_argument("--thin", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--data", dest="data_path")
    r.add_argument("--out", dest="out_path", help="output directory")
    r.add_argument("--prior", action="store_true",
                   help="add the Beta(1,1) survey prior / Normal(pi/4, pi/8) angle prior")
    r.add_argument("--n-comp", type=int, default=2)
    r.add_argument("--vw", type=float, default=8.0, help="weak throw speed")
    r.add_argument("--vs", type=float, default=10.0, help="strong throw speed")
    r.add_argument("--distance", type=float, default=8.0, help="basket distance")
    r.add_argument("--coin-stay", type=float, default=0.9,
                   help="stay probability of the blackbox Markov coin source")
    r.add_argument("--init", type=_floats, default=None, help="comma-separated start point")
    r.add_argument("--record-time", action="store_true",
                   help="store wall-clock seconds in the summary (breaks byte-reproducibility)")

    c = sub.add_parser("compare", help="check two sample files for consistent means")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--gmm-components", type=int, default=None,
                   help="sort mixture components by mean before comparing")
    return p


def parse_config(argv):
    """Parse ``run`` arguments into a validated :class:`RunConfig`."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command != "run":
        raise UsageError("parse_config handles the run subcommand only")
    fields = {k: v for k, v in vars(ns).items() if k not in ("command", "verbose")}
    try:
        return validate(RunConfig(**fields))
    except UsageError as e:
        parser.error(str(e))


def build_model(cfg):
    if cfg.model == "ball":
        params = BallParams(cfg.vw, cfg.vs, cfg.distance)
        cls = BallDeterministic if cfg.variant == "deterministic" else BallStochastic
        return cls(params, prior=cfg.prior)
    values = load_column(cfg.data_path)
    if cfg.model == "survey":
        if not isinstance(values[0], bool):
            raise DomainError("survey data must be true/false answers")
        if cfg.variant == "deterministic":
            return SurveyDeterministic(values, prior=cfg.prior)
        if cfg.variant == "blackbox":
            return SurveyBlackbox(values, MarkovCoins(cfg.coin_stay), prior=cfg.prior)
        return SurveyStochastic(values, prior=cfg.prior)
    if isinstance(values[0], bool):
        raise DomainError("gmm data must be real numbers")
    data = GmmData(np.array(values), cfg.n_comp)
    return GmmDeterministic(data) if cfg.variant == "deterministic" else GmmStochastic(data)


def default_init(cfg, model):
    if cfg.init is not None:
        return np.array(cfg.init, dtype=float)
    if cfg.model == "gmm":
        # spread the means over the data range to break label symmetry
        data = model.d.data
        mus = np.quantile(data, (np.arange(cfg.n_comp) + 0.5) / cfg.n_comp)
        return np.ravel(np.column_stack([mus, np.zeros(cfg.n_comp)]))
    return np.zeros(model.dimension())


def _num(v):
    return repr(float(v))


def write_samples(path, batches):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        dim = batches[0].dimension
        w.writerow(["chain", "iter", "logp"] + [f"x{i}" for i in range(dim)])
        for b in batches:
            for it, lp, row in zip(b.iters, b.logps, b.samples):
                w.writerow([b.chain, int(it), _num(lp)] + [_num(v) for v in row])


def read_samples(path):
    chains = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:3] != ["chain", "iter", "logp"]:
            raise DomainError(f"{path}: not a samples file")
        for row in reader:
            chains.setdefault(int(row[0]), []).append(row)
    batches = []
    for chain, rows in sorted(chains.items()):
        arr = np.array([[float(v) for v in r[1:]] for r in rows])
        batches.append(SampleBatch(samples=arr[:, 2:], logps=arr[:, 1], seed=-1,
                                   iters=arr[:, 0].astype(int), chain=chain))
    return batches


def summary_document(cfg, summary, seconds):
    def vec(a):
        return [float(v) for v in a]

    return {
        "model": cfg.model,
        "variant": cfg.variant,
        "sampler": cfg.sampler,
        "seed": cfg.seed,
        "mean": vec(summary.mean),
        "sd": vec(summary.sd),
        "ess": vec(summary.ess),
        "mcse": vec(summary.mcse),
        "divergences": summary.divergences,
        "accept_rate": summary.accept_rate,
        "seconds": seconds,
        "samples": summary.n,
        "config": {k: v for k, v in asdict(cfg).items() if k not in ("out_path", "record_time")},
    }


def cmd_run(cfg):
    model = build_model(cfg)
    init = default_init(cfg, model)
    if cfg.sampler == "hmc":
        scfg = HmcConfig(cfg.step_size, cfg.n_leapfrog, cfg.mass)
    else:
        scfg = SghmcConfig(cfg.step_size, cfg.n_leapfrog, cfg.friction, cfg.mass, cfg.n_draws)
    start = time.perf_counter()
    batches = run_chains(model, cfg.sampler, scfg, init, cfg.samples, cfg.burnin, cfg.thin,
                         cfg.seed, cfg.chains)
    seconds = time.perf_counter() - start if cfg.record_time else None
    transform = (lambda s: relabel_by_mean(s, cfg.n_comp)) if cfg.model == "gmm" else None
    doc = summary_document(cfg, summarize(batches, transform), seconds)
    text = json.dumps(doc, indent=2) + "\n"
    if cfg.out_path:
        os.makedirs(cfg.out_path, exist_ok=True)
        write_samples(os.path.join(cfg.out_path, "samples.csv"), batches)
        with open(os.path.join(cfg.out_path, "summary.json"), "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_compare(ns):
    a, b = read_samples(ns.a), read_samples(ns.b)
    k = ns.gmm_components
    transform = (lambda s: relabel_by_mean(s, k)) if k else None
    report = compare_runs(a, b, transform)
    sys.stdout.write(json.dumps(report.as_dict(), indent=2) + "\n")
    return 0 if report.ok else 1


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.command == "run":
            return cmd_run(parse_config(argv))
        return cmd_compare(ns)
    except (DomainError, SamplerError, OSError, ValueError) as e:
        log.error("%s", e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
