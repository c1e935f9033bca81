"""Monte-Carlo experiment harness.

A run sweeps one model parameter over a grid, draws ``trials`` instances
per grid point, applies the requested methods to the same instance (paired
comparison), and emits one CSV record per (method, grid point, trial).
Output order and content are deterministic given the config: per-trial
seeds derive from (base_seed, grid value, trial) via
:func:`heteroclust.rng.derive_seed` and are recorded in the CSV, so any
single trial can be replayed in isolation.

Wall-clock timing is off by default because it would break byte-level
reproducibility of the CSV; pass measure_runtime=True (CLI: --timings) to
fill the runtime_ms column.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .clustering import KMeansConfig, hhc, hlloyd, hsc
from .metrics import cer, mcr
from .model import generate_stochastic_tbm, generate_subgaussian_tbm
from .rng import derive_seed, mix
from .spectral import SpectralConfig

_MODELS = ("subgaussian", "stochastic")
_METHOD_ORDER = ("hhc", "hhc-hlloyd", "hsc", "hsc-hlloyd")
_PARAM_FOR_MODEL = {"subgaussian": "delta", "stochastic": "a"}

CSV_HEADER = ("method,n1,n2,n3,k1,k2,k3,param,value,trial,seed,"
              "mcr1,mcr2,mcr3,cer1,cer2,cer3,exact,runtime_ms")


@dataclass
class ExperimentConfig:
    model: str
    n: int
    k: int
    sweep_param: str
    sweep_values: tuple[float, ...]
    trials: int = 100
    methods: tuple[str, ...] = _METHOD_ORDER
    hlloyd_rounds: int = 10
    base_seed: int = 0
    balanced: bool = False
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)
    jobs: int = 1

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}")
        if self.sweep_param != _PARAM_FOR_MODEL[self.model]:
            raise ValueError(f"sweep parameter for {self.model} must be "
                             f"{_PARAM_FOR_MODEL[self.model]!r}")
        self.sweep_values = tuple(float(v) for v in self.sweep_values)
        if not self.sweep_values:
            raise ValueError("sweep grid must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        methods = tuple(self.methods)
        for m in methods:
            if m not in _METHOD_ORDER:
                raise ValueError(f"unknown method {m!r}")
        # canonical order keeps the CSV independent of config listing order
        self.methods = tuple(m for m in _METHOD_ORDER if m in methods)
        if self.hlloyd_rounds < 1:
            raise ValueError("hlloyd_rounds must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


_TOP_KEYS = {"model", "n", "k", "sweep", "trials", "methods", "hlloyd_rounds",
             "base_seed", "balanced", "spectral", "kmeans", "jobs"}
_SWEEP_KEYS = {"param", "values"}
_SPECTRAL_KEYS = {"tau_mode", "tau_const", "tau_fixed", "iters_per_round",
                  "max_rounds"}
_KMEANS_KEYS = {"restarts", "max_lloyd_iters", "seed"}


def _reject_unknown(mapping, allowed, where):
    unknown = set(mapping) - allowed
    if unknown:
        raise ValueError(f"unknown {where} keys: {sorted(unknown)}")


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build a config from a JSON document; unknown keys are rejected."""
    _reject_unknown(doc, _TOP_KEYS, "config")
    for required in ("model", "n", "k", "sweep"):
        if required not in doc:
            raise ValueError(f"config is missing required key {required!r}")
    sweep = doc["sweep"]
    _reject_unknown(sweep, _SWEEP_KEYS, "sweep")
    if "param" not in sweep or "values" not in sweep:
        raise ValueError("sweep must provide 'param' and 'values'")
    spectral_doc = doc.get("spectral", {})
    _reject_unknown(spectral_doc, _SPECTRAL_KEYS, "spectral")
    kmeans_doc = doc.get("kmeans", {})
    _reject_unknown(kmeans_doc, _KMEANS_KEYS, "kmeans")
    return ExperimentConfig(
        model=doc["model"],
        n=int(doc["n"]),
        k=int(doc["k"]),
        sweep_param=sweep["param"],
        sweep_values=tuple(sweep["values"]),
        trials=int(doc.get("trials", 100)),
        methods=tuple(doc.get("methods", _METHOD_ORDER)),
        hlloyd_rounds=int(doc.get("hlloyd_rounds", 10)),
        base_seed=int(doc.get("base_seed", 0)),
        balanced=bool(doc.get("balanced", False)),
        spectral=SpectralConfig(**spectral_doc),
        kmeans=KMeansConfig(**kmeans_doc),
        jobs=int(doc.get("jobs", 1)),
    )


@dataclass
class ExperimentRecord:
    method: str
    dims: tuple[int, int, int]
    ks: tuple[int, int, int]
    param: str
    value: float
    trial: int
    seed: int
    mcr_modes: tuple[float, float, float]
    cer_modes: tuple[float, float, float]
    exact: bool
    runtime_ms: float = 0.0

    @property
    def cer_mean(self) -> float:
        return sum(self.cer_modes) / 3.0


def _run_cell(cfg: ExperimentConfig, value: float, trial: int,
              measure_runtime: bool) -> list[ExperimentRecord]:
    seed = derive_seed(cfg.base_seed, value, trial)
    if cfg.model == "subgaussian":
        y, truth = generate_subgaussian_tbm(cfg.n, cfg.k, value, seed, cfg.balanced)
    else:
        y, truth = generate_stochastic_tbm(cfg.n, cfg.k, value, seed, cfg.balanced)
    ks = (cfg.k, cfg.k, cfg.k)
    kcfg = KMeansConfig(restarts=cfg.kmeans.restarts,
                        max_lloyd_iters=cfg.kmeans.max_lloyd_iters,
                        seed=mix(seed, cfg.kmeans.seed, 0x6B))
    need_hhc = any(m.startswith("hhc") for m in cfg.methods)
    need_hsc = any(m.startswith("hsc") for m in cfg.methods)
    stage_out: dict[str, tuple] = {}

    def timed(fn):
        start = time.perf_counter() if measure_runtime else 0.0
        result = fn()
        elapsed = (time.perf_counter() - start) * 1000.0 if measure_runtime else 0.0
        return result, elapsed

    if need_hhc:
        res, ms = timed(lambda: hhc(y, ks, cfg.spectral, kcfg))
        stage_out["hhc"] = (res.assignments, ms)
        if "hhc-hlloyd" in cfg.methods:
            refined, ms2 = timed(lambda: hlloyd(y, res.assignments, cfg.hlloyd_rounds))
            stage_out["hhc-hlloyd"] = (refined[0], ms + ms2)
    if need_hsc:
        res, ms = timed(lambda: hsc(y, ks, cfg.spectral, kcfg))
        stage_out["hsc"] = (res.assignments, ms)
        if "hsc-hlloyd" in cfg.methods:
            refined, ms2 = timed(lambda: hlloyd(y, res.assignments, cfg.hlloyd_rounds))
            stage_out["hsc-hlloyd"] = (refined[0], ms + ms2)

    records = []
    for method in cfg.methods:
        assignments, ms = stage_out[method]
        mcrs = tuple(mcr(truth.assignments[i], assignments[i]) for i in range(3))
        cers = tuple(cer(truth.assignments[i], assignments[i]) for i in range(3))
        records.append(ExperimentRecord(
            method=method, dims=(cfg.n, cfg.n, cfg.n), ks=ks,
            param=cfg.sweep_param, value=value, trial=trial, seed=seed,
            mcr_modes=mcrs, cer_modes=cers,
            exact=all(v == 0.0 for v in mcrs), runtime_ms=ms))
    return records


def _cell_task(args):
    return _run_cell(*args)


def run_experiment(cfg: ExperimentConfig,
                   measure_runtime: bool = False) -> list[ExperimentRecord]:
    """All records for the sweep, in (grid point, trial, method) order."""
    tasks = [(cfg, value, trial, measure_runtime)
             for value in cfg.sweep_values for trial in range(cfg.trials)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_cell_task, tasks))
    else:
        chunks = [_run_cell(*t) for t in tasks]
    records = [rec for chunk in chunks for rec in chunk]
    order = {m: i for i, m in enumerate(_METHOD_ORDER)}
    grid_pos = {v: i for i, v in enumerate(cfg.sweep_values)}
    records.sort(key=lambda r: (grid_pos[r.value], r.trial, order[r.method]))
    return records


def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(records, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            row = [r.method, *map(str, r.dims), *map(str, r.ks), r.param,
                   _fmt(r.value), str(r.trial), str(r.seed),
                   *(_fmt(v) for v in r.mcr_modes),
                   *(_fmt(v) for v in r.cer_modes),
                   "1" if r.exact else "0", _fmt(r.runtime_ms)]
            fh.write(",".join(row) + "\n")


def read_csv(path) -> list[ExperimentRecord]:
    records = []
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise ValueError(f"{path}: unexpected CSV header")
        for row in reader:
            records.append(ExperimentRecord(
                method=row["method"],
                dims=(int(row["n1"]), int(row["n2"]), int(row["n3"])),
                ks=(int(row["k1"]), int(row["k2"]), int(row["k3"])),
                param=row["param"], value=float(row["value"]),
                trial=int(row["trial"]), seed=int(row["seed"]),
                mcr_modes=tuple(float(row[f"mcr{i}"]) for i in (1, 2, 3)),
                cer_modes=tuple(float(row[f"cer{i}"]) for i in (1, 2, 3)),
                exact=row["exact"] == "1",
                runtime_ms=float(row["runtime_ms"])))
    return records


@dataclass
class SummaryRow:
    method: str
    param: str
    value: float
    trials: int
    cer_mean: float
    cer_std: float  # sample std, divisor n-1 (0 for a single trial)
    recovery_rate: float


def summarize(records) -> list[SummaryRow]:
    """Per (method, grid value): mean and sample std of the trial-mean CER,
    plus the exact-recovery fraction."""
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple, list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault((r.method, r.value), []).append(r)
    order = {m: i for i, m in enumerate(_METHOD_ORDER)}
    rows = []
    for (method, value), recs in sorted(groups.items(),
                                        key=lambda kv: (kv[0][1], order[kv[0][0]])):
        cers = np.array([r.cer_mean for r in recs])
        std = float(np.std(cers, ddof=1)) if cers.size > 1 else 0.0
        rows.append(SummaryRow(
            method=method, param=recs[0].param, value=value, trials=len(recs),
            cer_mean=float(cers.mean()), cer_std=std,
            recovery_rate=float(np.mean([r.exact for r in recs]))))
    return rows


def format_summary(rows) -> str:
    header = f"{'method':<12} {'param':<6} {'value':>10} {'trials':>6} " \
             f"{'cer_mean':>10} {'cer_std':>10} {'recovery':>9}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(f"{r.method:<12} {r.param:<6} {r.value:>10.4g} "
                     f"{r.trials:>6d} {r.cer_mean:>10.4f} {r.cer_std:>10.4f} "
                     f"{r.recovery_rate:>9.2f}")
    return "\n".join(lines)
