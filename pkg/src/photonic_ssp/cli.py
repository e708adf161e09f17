"""Command-line front end.

Exit codes: 0 yes, 1 no, 2 indeterminate, 3 usage/config/IO error.
Every CSV starts with ``#`` comment lines carrying the tool version, a hash
of the resolved configuration and the seed; JSON outputs carry the same in
a ``meta`` object.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .errors import SSPError, TargetOutOfRange, ThetaOutOfRange
from .network import build_network, export_network, network_stats
from .performance import (
    GeometryParams,
    crossovers,
    fisher_info,
    race_table,
    snr,
    theta_of_N,
    variance_bound,
)
from .presets import (
    carrier,
    default_geometry,
    electronic_models,
    optical_preset,
    snr_model,
)
from .propagation import NoiseModel, OpticalParams, apply_noise, propagate
from .readout import classify, tolerance_band
from .ssp_core import (
    SSPInstance,
    count_subsets_dp,
    decide,
    first_primes,
    load_instance,
    parse_instance,
)

TOOL = "photonic-ssp"
EXIT_YES, EXIT_NO, EXIT_INDETERMINATE, EXIT_ERROR = 0, 1, 2, 3
LOSSLESS_ASSERT_MAX_N = 20

CONFIG_KEYS = {
    "instance", "instance_file", "preset", "params", "noise", "threshold",
    "seed", "out", "geometry", "n_min", "n_max", "input_power", "noise_power",
    "trials",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2, which means "indeterminate" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    elements: Optional[list[int]] = None
    target: Optional[int] = None
    instance_file: Optional[str] = None
    preset: str = "lossless"
    params: Optional[dict] = None
    noise_floor: float = 0.0
    photon_budget: Optional[int] = None
    threshold: Optional[float] = None
    seed: int = 0
    out: Optional[str] = None
    geometry: dict = field(default_factory=dict)
    n_min: int = 1
    n_max: int = 30
    input_power: float = 1.0
    noise_power: float = 1.0
    trials: int = 1000

    def digest(self) -> str:
        # the output location does not change any result
        resolved = {k: v for k, v in asdict(self).items() if k != "out"}
        blob = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def header(self) -> list[str]:
        return [f"# {TOOL} {__version__} config={self.digest()} seed={self.seed}"]

    def meta(self) -> dict:
        return {"tool": TOOL, "version": __version__, "config_hash": self.digest(),
                "seed": self.seed}

    def optical_params(self) -> OpticalParams:
        base = optical_preset(self.preset)
        if not self.params:
            return base
        return OpticalParams.from_dict(_merge_params(base, self.params))

    def noise(self) -> NoiseModel:
        return NoiseModel(self.noise_floor, self.photon_budget, self.seed)

    def geometry_params(self) -> GeometryParams:
        return replace(default_geometry(), **self.geometry)

    def instance(self) -> SSPInstance:
        if self.instance_file:
            inst = load_instance(self.instance_file)
            if self.target is not None:
                inst = parse_instance(inst.elements, self.target)
            return inst
        if not self.elements:
            raise UsageError("no instance given: use --elements, --instance or a config file")
        return parse_instance(self.elements, self.target)


def _merge_params(base: OpticalParams, overrides: dict) -> dict:
    merged = base.to_dict()
    unknown = set(overrides) - set(merged)
    if unknown:
        raise UsageError(f"unknown optical parameters {sorted(unknown)}")
    merged.update(overrides)
    return merged


def _load_config(path: Optional[str]) -> dict[str, Any]:
    if not path:
        return {}
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(doc) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}")
    return doc


def resolve_config(args: argparse.Namespace) -> RunConfig:
    doc = _load_config(getattr(args, "config", None))
    cfg = RunConfig()
    inst = doc.get("instance")
    if inst is not None:
        cfg.elements = list(inst["elements"])
        cfg.target = inst.get("target")
    cfg.instance_file = doc.get("instance_file")
    cfg.preset = doc.get("preset", cfg.preset)
    cfg.params = doc.get("params")
    noise = doc.get("noise", {})
    cfg.noise_floor = float(noise.get("noise_floor_per_port", 0.0))
    cfg.photon_budget = noise.get("photon_budget")
    cfg.seed = int(noise.get("seed", doc.get("seed", 0)))
    for key in ("threshold", "out", "n_min", "n_max", "input_power", "noise_power", "trials"):
        if key in doc:
            setattr(cfg, key, doc[key])
    cfg.geometry = dict(doc.get("geometry", {}))

    # command-line flags win over the config file
    if getattr(args, "elements", None) is not None:
        cfg.elements = args.elements
        cfg.instance_file = None
    if getattr(args, "instance", None) is not None:
        cfg.instance_file = args.instance
        cfg.elements = None
    for key in ("target", "threshold", "seed", "out", "preset", "photon_budget",
                "n_min", "n_max", "input_power", "noise_power", "trials"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "noise_floor", None) is not None:
        cfg.noise_floor = args.noise_floor

    optical_preset(cfg.preset)  # reject unknown names early
    return cfg


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fmt(x: float) -> str:
    return repr(float(x))


def _emit(cfg: RunConfig, filename: str, text: str) -> None:
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, filename: str, doc: dict) -> None:
    _emit(cfg, filename, json.dumps({"meta": cfg.meta(), **doc}, indent=2) + "\n")


def cmd_decide(cfg: RunConfig) -> int:
    try:
        instance = cfg.instance()
    except TargetOutOfRange as exc:
        _emit_json(cfg, "decision.json", {"answer": "no", "reason": "TargetOutOfRange",
                                          "detail": str(exc)})
        print(f"answer: no (TargetOutOfRange: {exc})", file=sys.stderr)
        return EXIT_NO
    if instance.target is None:
        raise UsageError("decide needs a target (--target or config instance.target)")

    params = cfg.optical_params()
    oracle = count_subsets_dp(instance)
    dist = apply_noise(propagate(build_network(instance), params), cfg.noise())
    report = classify(dist, cfg.threshold, instance, oracle)
    truth = decide(instance, oracle)

    print(f"answer: {report.answer}  oracle: {'yes' if truth else 'no'}  "
          f"band: ({report.band.lower:.6g}, {report.band.upper:.6g}) valid={report.band.valid}  "
          f"mismatches: {report.mismatches}", file=sys.stderr)
    if (params == OpticalParams.lossless() and cfg.threshold is None
            and cfg.noise_floor == 0 and cfg.photon_budget is None
            and instance.size <= LOSSLESS_ASSERT_MAX_N):
        assert report.answer == ("yes" if truth else "no"), "lossless read-out contradicts oracle"

    _emit_json(cfg, "decision.json", report.to_dict())
    return {"yes": EXIT_YES, "no": EXIT_NO}.get(report.answer, EXIT_INDETERMINATE)


def distribution_csv(cfg: RunConfig, instance: SSPInstance) -> str:
    oracle = count_subsets_dp(instance)
    dist = apply_noise(propagate(build_network(instance), cfg.optical_params()), cfg.noise())
    band = tolerance_band(dist, oracle)
    values = dist.as_array(instance.total)
    present = oracle.present_mask()
    lines = cfg.header()
    lines.append(f"# elements={','.join(map(str, instance.elements))} preset={cfg.preset}")
    lines.append("port,intensity,category")
    lines += [f"{s},{_fmt(values[s])},{'present' if present[s] else 'absent'}"
              for s in range(instance.total + 1)]
    lines += [f"# ledger,{k},{_fmt(v)}" for k, v in dist.loss_ledger.items()]
    lines.append(f"# band,{_fmt(band.lower)},{_fmt(band.upper)},{str(band.valid).lower()}")
    return "\n".join(lines) + "\n"


def cmd_simulate(cfg: RunConfig) -> int:
    _emit(cfg, "distribution.csv", distribution_csv(cfg, cfg.instance()))
    return 0


def cmd_race(cfg: RunConfig) -> int:
    if cfg.n_min < 1 or cfg.n_max < cfg.n_min:
        raise UsageError(f"empty N range {cfg.n_min}..{cfg.n_max}")
    geom = cfg.geometry_params()
    models = electronic_models()
    rows = race_table(range(cfg.n_min, cfg.n_max + 1), geom, models,
                      carrier("photon"), carrier("actin"))
    lines = cfg.header()
    lines.append(",".join(["N", "photonic_s", "molecular_s"] + [f"{m.name}_s" for m in models]))
    for row in rows:
        cells = [str(row.n), _fmt(row.photonic_s), _fmt(row.molecular_s)]
        cells += [_fmt(row.electronic_s[m.name]) for m in models]
        lines.append(",".join(cells))
    for name, n_star in crossovers(geom, models, carrier("photon")).items():
        lines.append(f"# crossover,{name},{n_star if n_star is not None else 'none'}")
    _emit(cfg, "race.csv", "\n".join(lines) + "\n")
    return 0


def cmd_analyze(cfg: RunConfig) -> int:
    if cfg.n_min < 1 or cfg.n_max < cfg.n_min:
        raise UsageError(f"empty N range {cfg.n_min}..{cfg.n_max}")
    model = snr_model(cfg.input_power, cfg.noise_power)
    lines = cfg.header()
    lines.append(f"# C_db={_fmt(model.offset_db)} trials={cfg.trials}")
    lines.append("N,S,snr_db,theta,fisher_info,variance_bound,flag")
    for n in range(cfg.n_min, cfg.n_max + 1):
        s = sum(first_primes(n))
        row = [str(n), str(s), _fmt(snr(n, model))]
        try:
            theta = theta_of_N(n, model)
            row += [_fmt(theta), _fmt(fisher_info(theta)),
                    _fmt(variance_bound(theta, cfg.trials)), "ok"]
        except ThetaOutOfRange:
            row += ["", "", "", "theta_out_of_range"]
        lines.append(",".join(row))
    _emit(cfg, "analysis.csv", "\n".join(lines) + "\n")
    return 0


def cmd_export_network(cfg: RunConfig) -> int:
    _emit_json(cfg, "network.json", export_network(build_network(cfg.instance())))
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    stats = network_stats(build_network(cfg.instance()))
    _emit_json(cfg, "stats.json", asdict(stats))
    return 0


COMMANDS = {
    "decide": cmd_decide,
    "simulate": cmd_simulate,
    "race": cmd_race,
    "analyze": cmd_analyze,
    "export-network": cmd_export_network,
    "stats": cmd_stats,
}


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="JSON run configuration")
    parser.add_argument("--seed", type=int, default=default)
    parser.add_argument("--out", default=default, help="directory for output files")
    parser.add_argument("--preset", default=default,
                        help="optical preset: lossless | paper-default")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--elements", type=_int_list, help="e.g. 2,5,7,9")
        src.add_argument("--instance", help='JSON file {"elements": [...], "target": T}')
        p.add_argument("--target", type=int)

    def noise_args(p):
        p.add_argument("--noise-floor", type=float, help="per-port floor, fraction of input")
        p.add_argument("--photon-budget", type=int, help="enable Poisson shot noise")

    def range_args(p, default_max):
        p.add_argument("--n-min", type=int)
        p.add_argument("--n-max", type=int, help=f"default {default_max}")

    p = sub.add_parser("decide", help="answer the instance's target by optical read-out")
    instance_args(p)
    noise_args(p)
    p.add_argument("--threshold", type=float)
    _global_flags(p, suppress=True)

    p = sub.add_parser("simulate", help="per-port intensities, loss ledger and band as CSV")
    instance_args(p)
    noise_args(p)
    _global_flags(p, suppress=True)

    p = sub.add_parser("race", help="computing-time curves over successive primes")
    range_args(p, 30)
    _global_flags(p, suppress=True)

    p = sub.add_parser("analyze", help="SNR and Fisher-information table")
    range_args(p, 30)
    p.add_argument("--input-power", type=float)
    p.add_argument("--noise-power", type=float)
    p.add_argument("--trials", type=int)
    _global_flags(p, suppress=True)

    for name, text in (("export-network", "network nodes/edges as JSON"),
                       ("stats", "junction counts as JSON")):
        p = sub.add_parser(name, help=text)
        instance_args(p)
        _global_flags(p, suppress=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (SSPError, UsageError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
