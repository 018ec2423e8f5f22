"""Closed-form latency, duty-cycle and energy model of the decomposition loop.

All latencies are microseconds per iteration.  Two accountings are offered:

* ``serial``    -- decomposition + feedback + core, added end to end.  This
  is how the per-100-iteration breakdown tables are built.
* ``pipelined`` -- the critical path when traversal for the next iteration
  overlaps core + feedback of the current one::

      T_iter = max(T_gtu, T_core + T_feedback) + max(T_clamp, T_subq)

The two disagree; both are exposed rather than reconciled.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

MODES = ("serial", "pipelined")
AXI_WIDTHS = (128, 256, 512)
ITERS_PER_REPORT = 100

# (label, axi bits, PE count) rows of the resource-scaling projection
SCALING_ROWS = (
    ("Baseline (Artix-7)", 128, 8),
    ("Wider AXI", 256, 8),
    ("Wider AXI + More PEs", 256, 16),
    ("Wider AXI", 512, 8),
    ("Combined Scaling", 512, 32),
)

REPORT_HEADER = (
    "config", "mode", "axi_bits", "pe_count",
    "dec_ms", "comm_ms", "cobi_ms", "tot_ms", "pwr_w", "en_mj",
    "t_decomp_us", "t_iter_us", "duty_cycle_pct", "speedup_vs_reference",
)
SCALING_HEADER = ("configuration", "axi_bits", "pe_count", "t_clamp_us", "t_subq_us", "total_us",
                  "speedup", "raw_total_us")

_LATENCY_KEYS = ("t_gtu", "t_clamp", "t_subq", "t_core", "t_feedback")
_CONFIG_KEYS = _LATENCY_KEYS + ("power_w", "axi_bits", "pe_count")


@dataclass(frozen=True)
class TimingConfig:
    t_gtu: float
    t_clamp: float
    t_subq: float
    t_core: float
    t_feedback: float
    power_w: float
    axi_bits: int = 128
    pe_count: int = 8
    mode: str = "serial"

    def __post_init__(self):
        for key in _LATENCY_KEYS:
            if not getattr(self, key) >= 0:
                raise ValueError(f"{key} must be >= 0")
        if self.axi_bits not in AXI_WIDTHS:
            raise ValueError(f"axi_bits must be one of {AXI_WIDTHS}")
        if self.pe_count < 1:
            raise ValueError("pe_count must be >= 1")
        if not self.power_w > 0:
            raise ValueError("power_w must be > 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class TimingReport:
    t_decomp_us: float
    t_iter_us: float
    duty_cycle_pct: float
    time_ms_per_100_iters: float
    energy_mj_per_100_iters: float
    speedup_vs_reference: float | None = None


# -- formulas --------------------------------------------------------------

def decomp_latency(cfg: TimingConfig) -> float:
    return cfg.t_gtu + max(cfg.t_clamp, cfg.t_subq)


def iter_latency(cfg: TimingConfig) -> float:
    if cfg.mode == "pipelined":
        return max(cfg.t_gtu, cfg.t_core + cfg.t_feedback) + max(cfg.t_clamp, cfg.t_subq)
    return decomp_latency(cfg) + cfg.t_feedback + cfg.t_core


def duty_cycle(cfg: TimingConfig) -> float:
    """Percent of an iteration the subsolver spends solving."""
    t_iter = iter_latency(cfg)
    if t_iter <= 0:
        raise ZeroDivisionError("iteration latency is zero")
    return 100.0 * cfg.t_core / t_iter


def energy_mj(cfg: TimingConfig, duration_ms: float) -> float:
    if duration_ms < 0:
        raise ValueError("duration must be >= 0")
    return cfg.power_w * duration_ms


def scale(cfg: TimingConfig, new_axi_bits: int, new_pe_count: int) -> TimingConfig:
    """Project stage latencies onto a wider bus and/or more clamping PEs.

    Subproblem generation is bandwidth bound and scales with bus width;
    clamping scales with the PE count.  Other stages are unchanged.
    """
    if new_axi_bits < 128:
        raise ValueError("new_axi_bits must be >= 128")
    if new_pe_count < 1:
        raise ValueError("new_pe_count must be >= 1")
    return replace(
        cfg,
        t_subq=cfg.t_subq * cfg.axi_bits / new_axi_bits,
        t_clamp=cfg.t_clamp * cfg.pe_count / new_pe_count,
        axi_bits=new_axi_bits,
        pe_count=new_pe_count,
    )


def speedup(reference_time: float, candidate_time: float) -> float:
    if reference_time <= 0 or candidate_time <= 0:
        raise ValueError("times must be positive")
    return reference_time / candidate_time


def geomean(ratios: Iterable[float]) -> float:
    ratios = list(ratios)
    if not ratios or any(r <= 0 for r in ratios):
        raise ValueError("geomean needs a non-empty sequence of positive ratios")
    return math.exp(sum(math.log(r) for r in ratios) / len(ratios))


def report(cfg: TimingConfig, reference: TimingConfig | None = None) -> TimingReport:
    t_iter = iter_latency(cfg)
    total_ms = t_iter * ITERS_PER_REPORT / 1000.0
    ref = None
    if reference is not None:
        ref = speedup(iter_latency(replace(reference, mode=cfg.mode)), t_iter)
    return TimingReport(decomp_latency(cfg), t_iter, duty_cycle(cfg), total_ms, energy_mj(cfg, total_ms), ref)


# -- presets and config files ----------------------------------------------

def _load_json(name: str) -> dict:
    return json.loads(resources.files("isingdecomp").joinpath("data", name).read_text())


def preset_names() -> list[str]:
    return [k for k in _load_json("presets.json") if not k.startswith("_")]


def _config_from_mapping(data: dict, mode: str) -> TimingConfig:
    missing = [k for k in _LATENCY_KEYS + ("power_w",) if k not in data]
    if missing:
        raise ValueError(f"timing config missing keys: {', '.join(missing)}")
    unknown = set(data) - set(_CONFIG_KEYS) - {"family", "reference", "mode"}
    if unknown:
        raise ValueError(f"unknown timing config keys: {', '.join(sorted(unknown))}")
    kwargs = {k: data[k] for k in _CONFIG_KEYS if k in data}
    for key in _LATENCY_KEYS + ("power_w",):
        kwargs[key] = float(kwargs[key])
    for key in ("axi_bits", "pe_count"):
        if key in kwargs:
            kwargs[key] = int(kwargs[key])
    return TimingConfig(mode=mode, **kwargs)


def load_preset(name: str, mode: str = "serial") -> TimingConfig:
    presets = _load_json("presets.json")
    if name.startswith("_") or name not in presets:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(preset_names())}")
    return _config_from_mapping(presets[name], mode)


def preset_reference(name: str) -> str | None:
    return _load_json("presets.json")[name].get("reference")


def read_config(path: str | Path, mode: str | None = None) -> TimingConfig:
    """Read a JSON key -> number document with the TimingConfig fields."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError("timing config must be a JSON object")
    return _config_from_mapping(data, mode or data.get("mode", "serial"))


def decomp_latency_table() -> dict:
    return _load_json("decomp_latency.json")


def column_speedups(column: str) -> list[tuple[str, float]]:
    """Per-benchmark CPU / FPGA decomposition speedups for ``fpga_bram`` or ``fpga_extddr``."""
    rows = decomp_latency_table()["rows"]
    return [(r["benchmark"], speedup(r["cpu"], r[column])) for r in rows]


# -- tables ----------------------------------------------------------------

def _round1(x: float) -> float:
    return round(x, 1)


def scalability_rows(cfg: TimingConfig, reference_decomp_us: float | None = None) -> list[dict]:
    """Resource-scaling projection rows.

    ``total_us`` is summed from the stage latencies as displayed (one
    decimal), which is how the published projection table is composed;
    ``raw_total_us`` is the unrounded value.
    """
    rows = []
    for label, axi, pe in SCALING_ROWS:
        c = scale(cfg, axi, pe)
        gtu, clamp_, subq = _round1(c.t_gtu), _round1(c.t_clamp), _round1(c.t_subq)
        total = _round1(gtu + max(clamp_, subq))
        rows.append({
            "configuration": label, "axi_bits": axi, "pe_count": pe,
            "t_clamp_us": clamp_, "t_subq_us": subq, "total_us": total,
            "speedup": None if reference_decomp_us is None else speedup(reference_decomp_us, total),
            "raw_total_us": decomp_latency(c),
        })
    return rows


def report_row(name: str, cfg: TimingConfig, reference: TimingConfig | None = None) -> dict:
    rep = report(cfg, reference)
    per = ITERS_PER_REPORT / 1000.0
    return {
        "config": name, "mode": cfg.mode, "axi_bits": cfg.axi_bits, "pe_count": cfg.pe_count,
        "dec_ms": decomp_latency(cfg) * per, "comm_ms": cfg.t_feedback * per, "cobi_ms": cfg.t_core * per,
        "tot_ms": rep.time_ms_per_100_iters, "pwr_w": cfg.power_w, "en_mj": rep.energy_mj_per_100_iters,
        "t_decomp_us": rep.t_decomp_us, "t_iter_us": rep.t_iter_us, "duty_cycle_pct": rep.duty_cycle_pct,
        "speedup_vs_reference": rep.speedup_vs_reference,
    }


_PRECISION = {"pwr_w": 2, "duty_cycle_pct": 1, "speedup_vs_reference": 2, "speedup": 2,
              "t_clamp_us": 1, "t_subq_us": 1, "total_us": 1}


def format_csv(rows: Sequence[dict], header: Sequence[str]) -> str:
    """CSV text with display rounding: 2 decimals for times/energy, 1 for percent."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        out = []
        for key in header:
            v = row.get(key)
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.{_PRECISION.get(key, 2)}f}")
            else:
                out.append(str(v))
        writer.writerow(out)
    return buf.getvalue()

