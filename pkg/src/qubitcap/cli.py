"""Command-line interface.

Subcommands: ``capacity``, ``classify``, ``sweep-a``, ``gap-scan``, ``validate``.

Exit codes: 0 success, 1 internal error or failed validation, 2 invalid or
non-CPTP input, 3 partial results.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .classifier import classify
from .entropy_bloch import (
    ChannelParams,
    amplitude_damping,
    extremal_channel,
    is_cptp,
    shifted_depolarizing,
)
from .exceptions import DomainError, NotCPTPError, QubitCapError
from .oracle import OracleConfig, oracle_capacity_minmax, two_three_gap
from .solver import CapacitySolution, holevo_capacity
from .sweeps import GAP_COLUMNS, SWEEP_COLUMNS, fmt, gap_scan, sweep_A, validate

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_PARTIAL = 3


def _num(x):
    """Round to 12 significant digits for JSON output."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(format(x, ".12g"))


@dataclass
class RunRecord:
    params: list
    tag: str
    A: Optional[float]
    capacity: float
    regime: str
    q_z: float
    phi0: Optional[float]
    ensemble: dict
    oracle_capacity: Optional[float] = None
    gap: Optional[float] = None
    timing_ms: Optional[float] = None

    @classmethod
    def from_solution(cls, params: ChannelParams, sol: CapacitySolution,
                      timing_ms: Optional[float] = None) -> "RunRecord":
        cls_ = sol.classification or classify(params)
        ens = {
            "probabilities": list(sol.ensemble.probabilities),
            "inputs": [list(s.as_tuple()) for s in sol.ensemble.inputs],
        }
        return cls(list(params.as_tuple()), cls_.tag.value, cls_.A, sol.capacity,
                   sol.regime.value, sol.q_z, sol.phi0, ens, timing_ms=timing_ms)

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("A", "capacity", "q_z", "phi0", "oracle_capacity", "gap", "timing_ms"):
            d[key] = _num(d[key])
        d["params"] = [_num(v) for v in self.params]
        d["ensemble"] = {
            "probabilities": [_num(p) for p in self.ensemble["probabilities"]],
            "inputs": [[_num(v) for v in s] for s in self.ensemble["inputs"]],
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [
            f"params (l1, l2, l3, t): {', '.join(fmt(v) for v in self.params)}",
            f"classification:         {d['tag']}  (A = {fmt(d['A'])})",
            f"capacity [bits]:        {fmt(d['capacity'])}",
            f"regime:                 {d['regime']}",
            f"mean output q_z:        {fmt(d['q_z'])}",
            f"phi0 [rad]:             {fmt(d['phi0']) if d['phi0'] is not None else '-'}",
            "ensemble:",
        ]
        for p, s in zip(d["ensemble"]["probabilities"], d["ensemble"]["inputs"]):
            lines.append(f"  p = {fmt(p):<16} input = ({', '.join(fmt(v) for v in s)})")
        if d["oracle_capacity"] is not None:
            lines.append(f"oracle capacity:        {fmt(d['oracle_capacity'])}")
        if d["gap"] is not None:
            lines.append(f"two/three-state gap:    {fmt(d['gap'])}")
        if d["timing_ms"] is not None:
            lines.append(f"time [ms]:              {fmt(d['timing_ms'])}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _add_channel_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--l1", type=float, help="lambda1")
    p.add_argument("--l2", type=float, help="lambda2")
    p.add_argument("--l3", type=float, help="lambda3")
    p.add_argument("--t", type=float, help="z shift")
    p.add_argument("--preset", choices=("ad", "sdep", "extremal"),
                   help="amplitude damping, shifted depolarizing or two-Kraus extremal channel")
    p.add_argument("--mu", type=float, help="preset strength for ad/sdep")
    p.add_argument("--gamma", type=float, help="extremal preset angle (radians)")
    p.add_argument("--delta", type=float, help="extremal preset angle (radians)")


def _channel_from_args(args) -> ChannelParams:
    """Build unchecked parameters from flags; raises DomainError on bad flags."""
    if args.preset:
        if args.preset in ("ad", "sdep"):
            if args.mu is None:
                raise DomainError(f"--preset {args.preset} requires --mu")
            maker = amplitude_damping if args.preset == "ad" else shifted_depolarizing
            p = maker(args.mu)
        else:
            if args.gamma is None or args.delta is None:
                raise DomainError("--preset extremal requires --gamma and --delta")
            p = extremal_channel(args.gamma, args.delta)
        return ChannelParams.unchecked(*p.as_tuple())
    vals = (args.l1, args.l2, args.l3, args.t)
    if any(v is None for v in vals):
        raise DomainError("give --l1 --l2 --l3 --t or a --preset")
    return ChannelParams.unchecked(*vals)


def _checked_channel(args) -> ChannelParams:
    params = _channel_from_args(args)
    report = is_cptp(params)
    if not report.ok:
        raise NotCPTPError(report.diagnostic)
    return ChannelParams(*params.as_tuple())


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_capacity(args) -> int:
    params = _checked_channel(args)
    start = time.perf_counter()
    sol = holevo_capacity(params, grid_n=args.grid)
    elapsed = (time.perf_counter() - start) * 1e3
    record = RunRecord.from_solution(params, sol, None if args.no_timing else elapsed)
    if args.oracle:
        record.oracle_capacity = oracle_capacity_minmax(params)
    if args.gap and sol.classification is not None and sol.classification.A is not None:
        record.gap = two_three_gap(params, grid_n=args.grid).gap
    if args.format == "text":
        print(record.to_text())
    else:
        print(record.to_json())
    return EXIT_OK


def cmd_classify(args) -> int:
    params = _checked_channel(args)
    c = classify(params)
    out = {
        "A": _num(c.A),
        "lambda_m": _num(c.lambda_m),
        "tag": c.tag.value,
        "sub_case": c.sub_case.value,
        "orthogonality_prediction": c.orthogonality_prediction,
    }
    print(json.dumps(out))
    return EXIT_OK


def _write_csv(path: str, columns: Sequence[str], rows: list[dict]) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(row[c]) if not isinstance(row[c], str) else row[c]
                              for c in columns) + "\n")


def cmd_sweep_a(args) -> int:
    rows = sweep_A(args.l3, args.t, args.lm_min, args.lm_max, args.steps)
    try:
        _write_csv(args.out, SWEEP_COLUMNS, rows)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_gap_scan(args) -> int:
    rows, complete = gap_scan(args.samples, args.seed, grid_n=args.grid)
    try:
        _write_csv(args.out, GAP_COLUMNS, rows)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if not complete:
        print(f"warning: sampling budget exhausted after {len(rows)} rows", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = OracleConfig(n_phi=args.n_phi, n_q=args.n_q, seed=args.seed)
    summary = validate(args.samples, args.seed, args.tol, cfg,
                       include_fixtures=not args.no_fixtures)
    worst = summary["worst"]
    out = {
        "n_channels": summary["n_channels"],
        "samples": summary["samples"],
        "seed": summary["seed"],
        "tol": summary["tol"],
        "max_abs_diff": summary["max_abs_diff"],
        "worst": {
            "name": worst["name"],
            "params": [_num(v) for v in worst["params"]],
            "capacity": _num(worst["capacity"]),
            "oracle_capacity": _num(worst["oracle_capacity"]),
            "regime": worst["regime"],
        },
        "passed": summary["passed"],
    }
    print(json.dumps(out))
    return EXIT_OK if summary["passed"] else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitcap",
        description="Holevo capacity of qubit channels with diagonal contraction and z shift.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="capacity and optimal ensemble")
    _add_channel_args(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--grid", type=int, default=512, help="angle grid for optimality checks")
    p.add_argument("--oracle", action="store_true", help="also run the min-max oracle")
    p.add_argument("--gap", action="store_true", help="also report the two/three-state gap")
    p.add_argument("--no-timing", action="store_true", help="omit timing for reproducible output")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("classify", help="regime classification and A")
    _add_channel_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep-a", help="A versus lambda_m with l1 = l2 = lambda_m (CSV)")
    p.add_argument("--l3", type=float, default=0.5)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--lm-min", type=float, default=0.0)
    p.add_argument("--lm-max", type=float, default=1.0 / math.sqrt(2.0))
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_a)

    p = sub.add_parser("gap-scan", help="two/three-state gaps for random channels (CSV)")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gap_scan)

    p = sub.add_parser("validate", help="solver versus brute-force oracle")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=5e-5)
    p.add_argument("--n-phi", type=int, default=2001)
    p.add_argument("--n-q", type=int, default=2001)
    p.add_argument("--no-fixtures", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "steps", 2) < 2:
        parser.error("--steps must be at least 2")
    if args.command == "gap-scan" and args.samples < 1:
        parser.error("--samples must be at least 1")
    if args.command == "validate":
        if args.samples < 0:
            parser.error("--samples must be nonnegative")
        if args.samples == 0 and args.no_fixtures:
            parser.error("--samples 0 with --no-fixtures leaves nothing to validate")
    try:
        return args.func(args)
    except NotCPTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except QubitCapError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
