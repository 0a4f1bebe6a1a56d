"""Single runs, parameter sweeps and CSV/JSON output."""
from __future__ import annotations

import csv
import enum
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .density import DerivativeMethod
from .errors import QslError
from .metrics import QslRecord, qsl_series
from .params import ModelParams, NormalizationMode

log = logging.getLogger(__name__)


class OutputFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


CSV_COLUMNS = ("t", "F", "B", "delta_op", "delta_tr", "delta_hs", "t_lb", "t_lb_over_t")

SATURATION_TOL = 0.02


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    t_max: float = 20.0
    steps: int = 400
    mode: NormalizationMode = NormalizationMode.INITIAL_UNIT
    derivative: DerivativeMethod = DerivativeMethod.ANALYTIC
    outputs: tuple = ()

    def __post_init__(self):
        if isinstance(self.steps, bool) or not isinstance(self.steps, (int, np.integer)) \
                or self.steps < 2:
            raise ValueError(f"steps must be an integer >= 2, got {self.steps!r}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max!r}")
        object.__setattr__(self, "mode", NormalizationMode(self.mode))
        object.__setattr__(self, "derivative", DerivativeMethod(self.derivative))
        object.__setattr__(self, "outputs", tuple(
            (OutputFormat(f), Path(p)) for f, p in self.outputs))

    def times(self) -> np.ndarray:
        return np.arange(self.steps + 1) * (self.t_max / self.steps)

    def echo(self) -> dict:
        """Every input parameter, JSON-serialisable."""
        p = self.params
        return {
            "omega": p.omega, "beta": p.beta, "eta": p.eta, "j": p.j,
            "n_max": p.n_max, "fock_dim": p.fock,
            "n3_cap": p.n3_cap, "n3_tol": p.n3_tol,
            "quad_tol": p.quad_tol, "quad_budget": p.quad_budget,
            "t_max": self.t_max, "steps": self.steps,
            "mode": self.mode.value, "derivative": self.derivative.value,
        }


@dataclass(frozen=True)
class SweepSpec:
    eta_list: tuple = (0.1, 1.0, 5.0)
    n_max_list: tuple = (0, 5, 10)
    grid: tuple = (20.0, 400)
    base: ModelParams = field(default_factory=ModelParams)
    mode: NormalizationMode = NormalizationMode.INITIAL_UNIT
    derivative: DerivativeMethod = DerivativeMethod.ANALYTIC

    def __post_init__(self):
        if not self.eta_list or not self.n_max_list:
            raise ValueError("eta_list and n_max_list must be non-empty")
        object.__setattr__(self, "eta_list", tuple(float(e) for e in self.eta_list))
        object.__setattr__(self, "n_max_list", tuple(int(n) for n in self.n_max_list))

    def keys(self) -> list[tuple[float, int]]:
        return [(e, n) for e in self.eta_list for n in self.n_max_list]

    def config(self, eta: float, n_max: int) -> RunConfig:
        # fock_dim is re-derived for each key unless pinned on the base
        params = ModelParams(
            omega=self.base.omega, beta=self.base.beta, eta=eta, j=self.base.j,
            n_max=n_max, fock_dim=self.base.fock_dim, n3_cap=self.base.n3_cap,
            n3_tol=self.base.n3_tol, quad_tol=self.base.quad_tol,
            quad_budget=self.base.quad_budget)
        t_max, steps = self.grid
        return RunConfig(params, t_max, steps, self.mode, self.derivative)


@dataclass(frozen=True)
class SaturationEntry:
    eta: float
    sup_diff: float
    peak: float
    ratio: float
    passed: bool


@dataclass
class SweepResult:
    records: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    saturation: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def run_single(config: RunConfig) -> list[QslRecord]:
    """One record per grid time ``t_i = i t_max / steps``, ``i = 0..steps``."""
    return qsl_series(config.times(), config.params, config.mode, config.derivative)


def _run_key(config: RunConfig):
    try:
        return run_single(config), None
    except QslError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def saturation_report(records: dict, lo: int = 5, hi: int = 10,
                      tol: float = SATURATION_TOL) -> list[SaturationEntry]:
    """Sup-difference of t_LB between the ``lo`` and ``hi`` curves, per eta."""
    out = []
    for eta in sorted({e for e, _ in records}):
        a, b = records.get((eta, lo)), records.get((eta, hi))
        if a is None or b is None:
            continue
        ta = np.array([r.t_LB for r in a])
        tb = np.array([r.t_LB for r in b])
        sup = float(np.abs(ta - tb).max())
        peak = float(max(ta.max(), tb.max()))
        ratio = sup / peak if peak > 0 else 0.0
        out.append(SaturationEntry(eta, sup, peak, ratio, ratio <= tol))
    return out


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate every (eta, n_max) key; failures are recorded per key.

    Keys run in worker processes when ``workers > 1``; results are collected
    in key order, so the output does not depend on scheduling.
    """
    keys = spec.keys()
    configs = [spec.config(*k) for k in keys]
    if workers is None:
        workers = min(len(keys), os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_key, configs))
    else:
        results = [_run_key(c) for c in configs]
    res = SweepResult()
    for key, (recs, err) in zip(keys, results):
        if err is None:
            res.records[key] = recs
        else:
            log.error("sweep key eta=%g n_max=%d failed: %s", key[0], key[1], err)
            res.errors[key] = err
    res.saturation = saturation_report(res.records)
    return res


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _row(r: QslRecord) -> list[float]:
    return [r.t, r.F, r.B, r.delta_op, r.delta_tr, r.delta_hs, r.t_LB, r.t_lb_over_t]


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_fmt(x) for x in _row(r)])
    return buf.getvalue()


def to_json(records, config: RunConfig | None = None) -> str:
    doc = {
        "config": config.echo() if config is not None else None,
        "records": [dict(zip(CSV_COLUMNS, map(float, _row(r)))) for r in records],
    }
    return json.dumps(doc, indent=1) + "\n"


def records_from_json(text: str) -> list[QslRecord]:
    doc = json.loads(text)
    return [QslRecord(d["t"], d["F"], d["B"], d["delta_op"], d["delta_tr"],
                      d["delta_hs"], d["t_lb"]) for d in doc["records"]]


def emit(records, fmt: OutputFormat | str, path, config: RunConfig | None = None) -> Path:
    """Write ``records`` to ``path`` as CSV or JSON; raises OSError on I/O failure."""
    records = list(records)
    if not records:
        raise ValueError("no records to emit")
    fmt = OutputFormat(fmt)
    text = to_csv(records) if fmt is OutputFormat.CSV else to_json(records, config)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def sweep_path(path: Path, eta: float, n_max: int) -> Path:
    """Per-key file name derived from ``path``: ``stem_eta<eta>_nmax<n>.suffix``."""
    path = Path(path)
    return path.with_name(f"{path.stem}_eta{eta:g}_nmax{n_max}{path.suffix}")

