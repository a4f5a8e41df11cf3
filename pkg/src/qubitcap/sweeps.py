"""Batch computations behind the command line: A sweeps, gap scans, validation."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

from .classifier import classify, compute_A
from .entropy_bloch import (
    ChannelParams,
    amplitude_damping,
    extremal_channel,
    is_cptp,
    shifted_depolarizing,
)
from .exceptions import SamplingError
from .oracle import OracleConfig, derive_seed, oracle_capacity_minmax, sample_cptp, two_three_gap
from .solver import holevo_capacity

__all__ = [
    "SWEEP_COLUMNS",
    "GAP_COLUMNS",
    "fmt",
    "worker_count",
    "parallel_map",
    "fixture_channels",
    "sweep_A",
    "gap_scan",
    "validate",
]

SWEEP_COLUMNS = ("lambda_m", "A", "lm2_minus_l32", "is_cptp", "tag")
GAP_COLUMNS = ("l1", "l2", "l3", "t", "A", "cap2", "cap3", "gap")


def fmt(x) -> str:
    """Render a number with 12 significant digits; ``None`` becomes ``undefined``."""
    if x is None:
        return "undefined"
    if isinstance(x, bool):
        return "true" if x else "false"
    return format(float(x), ".12g")


def worker_count() -> int:
    """Worker threads from ``HOLEVO_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("HOLEVO_THREADS", "0").strip() or "0"
    n = int(raw)
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def parallel_map(func: Callable, items: Iterable, threads: Optional[int] = None) -> list:
    """Order-preserving map over ``items`` using a thread pool."""
    items = list(items)
    n = threads if threads is not None else worker_count()
    if n <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def fixture_channels() -> dict[str, ChannelParams]:
    """Named example channels: the standard families plus the two three-state cases."""
    out = {
        "shifted_depolarizing_0.5": shifted_depolarizing(0.5),
        "three_state_0.6": ChannelParams(0.6, 0.6, 0.5, 0.5),
        "three_state_0.435": ChannelParams(0.5, 0.435, 0.435, 0.5),
        "identity": ChannelParams(1.0, 1.0, 1.0, 0.0),
        "constant_0.5": ChannelParams(0.0, 0.0, 0.0, 0.5),
        "unital_0.8_0.5_0.3": ChannelParams(0.8, 0.5, 0.3, 0.0),
        "line_0.8_t0.6": ChannelParams(0.8, 0.0, 0.0, 0.6),
        "extremal_0.7_1.1": extremal_channel(0.7, 1.1),
    }
    for mu in (0.1, 0.3, 0.5, 0.7, 0.9):
        out[f"amplitude_damping_{mu}"] = amplitude_damping(mu)
        out[f"shifted_depolarizing_{mu}"] = shifted_depolarizing(mu)
    return out


def sweep_A(l3: float, t: float, lm_min: float, lm_max: float, steps: int) -> list[dict]:
    """Rows of ``A`` and ``lm^2 - l3^2`` for ``l1 = l2 = lm`` on an even grid."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    rows = []
    for i in range(steps):
        lm = lm_min + (lm_max - lm_min) * i / (steps - 1)
        if i == steps - 1:
            lm = lm_max
        params = ChannelParams.unchecked(lm, lm, l3, t)
        ok = is_cptp(params).ok
        tag = classify(params).tag.value if ok else "NotCPTP"
        rows.append(
            {
                "lambda_m": lm,
                "A": compute_A(params),
                "lm2_minus_l32": lm * lm - l3 * l3,
                "is_cptp": ok,
                "tag": tag,
            }
        )
    return rows


def _gap_row(args) -> Optional[dict]:
    seed, index, grid_n = args
    try:
        params = sample_cptp(derive_seed(seed, index), (0.0, 0.5))
    except SamplingError:
        return None
    res = two_three_gap(params, grid_n=grid_n)
    l1, l2, l3, t = params.as_tuple()
    return {"l1": l1, "l2": l2, "l3": l3, "t": t, "A": res.A,
            "cap2": res.cap2, "cap3": res.cap3, "gap": res.gap}


def gap_scan(samples: int, seed: int, grid_n: int = 512,
             threads: Optional[int] = None) -> tuple[list[dict], bool]:
    """Two/three-state gaps for channels sampled with ``A`` in (0, 1/2).

    Returns ``(rows, complete)``; rows stop at the first sample whose draw
    budget ran out.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    results = parallel_map(_gap_row, [(seed, i, grid_n) for i in range(samples)], threads)
    rows = []
    for r in results:
        if r is None:
            return rows, False
        rows.append(r)
    return rows, True


def _validate_one(args):
    name, params, cfg = args
    sol = holevo_capacity(params)
    ref = oracle_capacity_minmax(params, cfg)
    return {"name": name, "params": list(params.as_tuple()), "capacity": sol.capacity,
            "oracle_capacity": ref, "abs_diff": abs(sol.capacity - ref),
            "regime": sol.regime.value}


def validate(samples: int = 200, seed: int = 42, tol: float = 5e-5,
             cfg: OracleConfig = OracleConfig(), include_fixtures: bool = True,
             threads: Optional[int] = None) -> dict:
    """Compare :func:`holevo_capacity` with the min-max oracle."""
    jobs = []
    if include_fixtures:
        jobs += [(name, p, cfg) for name, p in fixture_channels().items()]
    for i in range(samples):
        jobs.append((f"random_{i}", sample_cptp(derive_seed(seed, i)), cfg))
    if not jobs:
        raise ValueError("nothing to validate: no samples and no fixtures")
    results = parallel_map(_validate_one, jobs, threads)
    worst = max(results, key=lambda r: r["abs_diff"])
    max_diff = worst["abs_diff"]
    return {
        "n_channels": len(results),
        "samples": samples,
        "seed": seed,
        "tol": tol,
        "max_abs_diff": max_diff,
        "worst": worst,
        "passed": bool(max_diff <= tol),
    }

