"""Command-line entry point: ``validate``, ``entanglement``, ``sweep``, ``parity``.

Every flag can also come from ``--config FILE`` holding ``key=value`` lines
(keys are the long flag names with dashes turned into underscores). Flags
given on the command line win over the file.

Sweep CSV columns, in order::

    index, x_param, x, y_param, y, target, analytic, exact, sampled, stderr, shots, seed

preceded by ``# key=value`` lines echoing the run configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import analytic
from .errors import GraphError, InvalidSweepAxis, NonInvertibleParameters, NonPositiveCorrelator
from .graph_model import BipartiteGraph, load_graph, parity_sets
from .noise import NoiseModel
from .protocols import (
    child_seeds,
    estimate_parity_counts,
    measure_entanglement_distance,
    measure_parity_correlators,
)
from .state_engine import PauliString, QubitParams, build_graph_state, pauli_expectation

ANGLE_NAMES = ("theta_u", "phi_u", "theta_v", "phi_v")
SWEEP_TARGETS = ("entanglement",) + tuple(analytic.CORRELATORS)
CSV_COLUMNS = ("index", "x_param", "x", "y_param", "y", "target", "analytic", "exact",
               "sampled", "stderr", "shots", "seed")
_CORRELATOR_PAULI = {
    "cxx_all": ("X", "all"), "cx_U": ("X", "U"), "czz_all": ("Z", "all"), "cz_V": ("Z", "V"),
}

_PI_RE = re.compile(
    r"^(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_angle(text: str | float) -> float:
    """Radians from ``0.5``, ``pi``, ``-pi/2``, ``3pi/4`` or ``3*pi/16``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = text.strip().lower()
    m = _PI_RE.match(s)
    if m:
        value = float(m["num"] or 1.0) * math.pi / float(m["den"] or 1.0)
        return -value if m["sign"] == "-" else value
    try:
        return float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None


@dataclass
class RunConfig:
    graph: Optional[str] = None
    theta_u: str = "0"
    phi_u: str = "0"
    theta_v: str = "0"
    phi_v: str = "0"
    params: Optional[str] = None
    shots: Optional[int] = None
    seed: int = 0
    noise: str = "ideal"
    method: Optional[str] = None
    out: Optional[str] = None
    format: Optional[str] = None
    round: bool = False

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                lines.append(f"{f.name}={str(value).lower() if isinstance(value, bool) else value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(**_coerce(_parse_kv(text)))

    def noise_model(self) -> NoiseModel:
        return NoiseModel.parse(self.noise)

    def resolved_method(self) -> str:
        method = self.method or ("sampled" if self.shots else "exact")
        if method == "analytic":
            return "analytic"
        if method == "exact":
            return "exact_statevector"
        if method == "sampled":
            return "sampled_ideal" if self.noise_model().is_ideal else "sampled_noisy"
        raise ValueError(f"--method must be analytic, exact or sampled, got {method!r}")

    def qubit_params(self, g: BipartiteGraph) -> QubitParams:
        if self.params:
            kv = _parse_kv(Path(self.params).read_text(encoding="utf-8"))
            theta = [parse_angle(a) for a in kv["theta"].split(",")]
            phi = [parse_angle(a) for a in kv["phi"].split(",")]
            return QubitParams(np.array(theta), np.array(phi), g.u_count)
        return QubitParams.for_graph(g, **{k: parse_angle(getattr(self, k)) for k in ANGLE_NAMES})


def _parse_kv(text: str) -> dict[str, str]:
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {raw!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _coerce(raw: dict[str, str]) -> dict:
    known = {f.name for f in fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    out: dict = dict(raw)
    if "shots" in out:
        out["shots"] = int(out["shots"])
    if "seed" in out:
        out["seed"] = int(out["seed"])
    if "round" in out:
        out["round"] = out["round"].lower() in ("1", "true", "yes", "on")
    return out


# --------------------------------------------------------------------------
# Commands. Each returns (exit code, text to emit).


def cmd_validate(graph_path: str) -> tuple[int, str]:
    try:
        g = load_graph(graph_path)
    except (GraphError, OSError) as exc:
        return 1, f"error: {type(exc).__name__}: {exc}\n"
    ps = parity_sets(g)
    card = ps.cardinalities()
    degrees = " ".join(f"{x}:{d}" for x, d in sorted(ps.degree.items()))
    return 0, (
        f"|U|={g.u_count} |V|={g.v_count} |E|={len(g.edges)} "
        f"U_odd={card['u_odd']} V_odd={card['v_odd']} "
        f"U_even={card['u_even']} V_even={card['v_even']}\n"
        f"degree {degrees}\n"
    )


def _config_echo(cfg: RunConfig) -> dict:
    return {k: v for k, v in asdict(cfg).items() if k not in ("out", "format")}


def cmd_entanglement(cfg: RunConfig, qubit: int) -> tuple[int, dict]:
    g = load_graph(cfg.graph)
    params = cfg.qubit_params(g)
    record: dict = {"command": "entanglement", "config": _config_echo(cfg), "qubit": qubit}
    record["analytic"] = measure_entanglement_distance(g, params, qubit, method="analytic").to_dict()
    record["exact"] = measure_entanglement_distance(
        g, params, qubit, method="exact_statevector").to_dict()
    if cfg.shots or (cfg.method == "sampled"):
        method = cfg.resolved_method()
        if not method.startswith("sampled"):
            method = "sampled_ideal" if cfg.noise_model().is_ideal else "sampled_noisy"
        record["sampled"] = measure_entanglement_distance(
            g, params, qubit, cfg.shots or 1024, cfg.seed, cfg.noise_model(), method
        ).to_dict()
    return 0, record


def cmd_parity(cfg: RunConfig) -> tuple[int, dict]:
    g = load_graph(cfg.graph)
    params = cfg.qubit_params(g)
    method = cfg.resolved_method()
    corr = measure_parity_correlators(
        g, params, cfg.shots or 1024, cfg.seed, cfg.noise_model(), method
    )
    record: dict = {"command": "parity", "config": _config_echo(cfg), "method": method,
                    "correlators": corr.to_dict()}
    try:
        counts = estimate_parity_counts(corr, params)
    except (NonInvertibleParameters, NonPositiveCorrelator) as exc:
        record["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return 2, record
    record["counts"] = counts.to_dict()
    if cfg.round:
        record["rounded"] = counts.rounded()
    return 0, record


@dataclass(frozen=True)
class SweepSpec:
    x_param: str
    y_param: str
    start: float
    stop: float
    step: float
    target: str = "entanglement"
    qubit: int = 0

    def __post_init__(self) -> None:
        for axis in (self.x_param, self.y_param):
            if axis not in ANGLE_NAMES:
                raise InvalidSweepAxis(f"sweep axis {axis!r} not in {ANGLE_NAMES}")
        if self.x_param == self.y_param:
            raise InvalidSweepAxis("the two sweep axes must differ")
        if self.target not in SWEEP_TARGETS:
            raise InvalidSweepAxis(f"sweep target {self.target!r} not in {SWEEP_TARGETS}")
        if not self.step > 0:
            raise ValueError("sweep step must be positive")
        if self.start > self.stop:
            raise ValueError("sweep start must not exceed stop")

    def grid(self) -> np.ndarray:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(n)


def _exact_target(g: BipartiteGraph, params: QubitParams, spec: SweepSpec) -> float:
    if spec.target == "entanglement":
        return measure_entanglement_distance(g, params, spec.qubit,
                                             method="exact_statevector").value
    label, side = _CORRELATOR_PAULI[spec.target]
    qubits = {"all": range(g.n_qubits), "U": g.U, "V": g.V}[side]
    return pauli_expectation(build_graph_state(g, params), PauliString.uniform(label, qubits))


def sweep_rows(cfg: RunConfig, spec: SweepSpec) -> list[dict]:
    g = load_graph(cfg.graph)
    base = cfg.qubit_params(g)
    grid = spec.grid()
    method = cfg.resolved_method()
    sampled = method.startswith("sampled")
    shots = cfg.shots or 1024
    seeds = child_seeds(cfg.seed, grid.size * grid.size)
    model = cfg.noise_model()
    rows = []
    for i, x in enumerate(grid):
        for j, y in enumerate(grid):
            idx = i * grid.size + j
            params = base.with_angles(**{spec.x_param: float(x), spec.y_param: float(y)})
            if spec.target == "entanglement":
                value = analytic.entanglement_distance(g, params, spec.qubit)
            else:
                value = analytic.CORRELATORS[spec.target](g, params)
            row = {"index": idx, "x_param": spec.x_param, "x": float(x),
                   "y_param": spec.y_param, "y": float(y), "target": spec.target,
                   "analytic": value, "exact": _exact_target(g, params, spec),
                   "sampled": "", "stderr": "", "shots": "", "seed": ""}
            if sampled:
                if spec.target == "entanglement":
                    est = measure_entanglement_distance(g, params, spec.qubit, shots, seeds[idx],
                                                        model, method)
                else:
                    est = getattr(measure_parity_correlators(g, params, shots, seeds[idx], model,
                                                             method), spec.target)
                row.update(sampled=est.value, stderr=est.stderr, shots=shots, seed=seeds[idx])
            rows.append(row)
    return rows


def cmd_sweep(cfg: RunConfig, spec: SweepSpec) -> tuple[int, str]:
    rows = sweep_rows(cfg, spec)
    if (cfg.format or "csv") == "json":
        return 0, _dump_json({"command": "sweep", "config": _config_echo(cfg),
                              "sweep": asdict(spec), "rows": rows})
    buf = io.StringIO()
    for key, value in _config_echo(cfg).items():
        buf.write(f"# {key}={value}\n")
    for key, value in asdict(spec).items():
        buf.write(f"# sweep.{key}={value!r}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return 0, buf.getvalue()


# --------------------------------------------------------------------------
# argparse plumbing


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file mirroring the flags")
    p.add_argument("--graph", help="graph file (U n / V m / edge lines)")
    for name in ANGLE_NAMES:
        p.add_argument("--" + name.replace("_", "-"), dest=name,
                       help="uniform angle for that side, radians; 'pi/4' style accepted")
    p.add_argument("--params", help="per-qubit angles file with theta=... and phi=... lists")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--noise", help="ideal | default | readout=..,x1=..,cnot=..,channel=..")
    p.add_argument("--method", choices=("analytic", "exact", "sampled"))
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--round", action="store_true", default=None,
                   help="also report nearest-integer counts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bigraph-states",
        description="Bipartite graph states: entanglement distance and degree-parity counting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a graph file and print its degree summary")
    p.add_argument("graph_path", nargs="?")
    _common(p)

    p = sub.add_parser("entanglement", help="entanglement distance of one qubit")
    _common(p)
    p.add_argument("--qubit", type=int, default=0)

    p = sub.add_parser("sweep", help="entanglement or correlator over a 2-D angle grid")
    _common(p)
    p.add_argument("--x-param", required=True)
    p.add_argument("--y-param", required=True)
    p.add_argument("--start", default="0")
    p.add_argument("--stop", default="pi")
    p.add_argument("--step", default="pi/16")
    p.add_argument("--target", default="entanglement")
    p.add_argument("--qubit", type=int, default=0)

    p = sub.add_parser("parity", help="odd/even degree counts from the correlator protocol")
    _common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    merged: dict = {}
    if args.config:
        merged.update(_coerce(_parse_kv(Path(args.config).read_text(encoding="utf-8"))))
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            merged[f.name] = value
    return RunConfig(**merged)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "validate":
            code, text = cmd_validate(args.graph_path or cfg.graph)
            if code:
                sys.stderr.write(text)
            else:
                _emit(text, cfg.out)
            return code
        if cfg.graph is None:
            raise ValueError("--graph is required")
        if args.command == "sweep":
            spec = SweepSpec(args.x_param, args.y_param, parse_angle(args.start),
                             parse_angle(args.stop), parse_angle(args.step), args.target,
                             args.qubit)
            code, text = cmd_sweep(cfg, spec)
        else:
            if cfg.format == "csv":
                raise ValueError(f"{args.command} emits JSON only")
            if args.command == "entanglement":
                code, record = cmd_entanglement(cfg, args.qubit)
            else:
                code, record = cmd_parity(cfg)
            text = _dump_json(record)
        _emit(text, cfg.out)
        return code
    except (GraphError, InvalidSweepAxis, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
