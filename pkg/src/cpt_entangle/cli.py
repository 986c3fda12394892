"""Command-line interface.

Scenario files are JSON; complex numbers are ``[re, im]`` pairs.  Tables go
out as CSV (header row, LF endings, 17 significant digits) and everything
else as JSON.  Exit codes: 0 ok, 1 invalid input, 2 numerical failure; on
failure a JSON error record is written to stderr.
"""
import argparse
import csv
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .dynamics import evolve, product_hamiltonian
from .entanglement import (
    eigen_product_state,
    entanglement_entropy,
    is_product,
    schmidt,
    singlet_entropy_closed_form,
    singlet_entropy_pipeline,
    two_ptqubit_entanglement,
)
from .errors import CPTEntangleError, NumericalError, UnphysicalState, ValidationError
from .metric import MetricSpace, norm, tensor_space
from .ptqubit import PTParams, build, verify_algebra
from .rate import h_max, trajectory

DEFAULT_THETA = math.pi / 6
ALGEBRA_TOL = 1e-10


class UsageError(ValidationError):
    pass


def _num(x):
    return format(float(x), ".17g")


@dataclass
class ScenarioConfig:
    system1: dict = field(default_factory=lambda: {"r": 1.0, "s": 1.0, "t": 1.0, "theta": DEFAULT_THETA})
    system2: dict = field(default_factory=lambda: {"r": 1.0, "s": 1.0, "t": 1.0, "theta": DEFAULT_THETA})
    state: dict = field(default_factory=lambda: {"basis": "computational", "amplitudes": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]})
    times: dict = field(default_factory=lambda: {"start": 0.0, "stop": 3.0, "steps": 31})
    options: dict = field(default_factory=lambda: {"theory": "cpt", "log_base": "2", "seed": 0})

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ValidationError("scenario must be a JSON object")
        unknown = set(raw) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ValidationError(f"unknown scenario keys: {sorted(unknown)}")
        cfg = cls()
        for name in ("system1", "system2", "state", "times", "options"):
            if name in raw:
                if not isinstance(raw[name], dict):
                    raise ValidationError(f"{name} must be an object")
                getattr(cfg, name).update(raw[name])
        cfg.validate()
        return cfg

    def validate(self):
        for name in ("system1", "system2"):
            rec = getattr(self, name)
            if set(rec) != {"r", "s", "t", "theta"}:
                raise ValidationError(f"{name} needs exactly r, s, t, theta")
            try:
                PTParams(**{k: float(v) for k, v in rec.items()})
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"{name}: {exc}") from exc
        if self.state.get("basis") not in ("computational", "cpt-eigen"):
            raise ValidationError("state.basis must be 'computational' or 'cpt-eigen'")
        amps = self.state.get("amplitudes")
        if not isinstance(amps, list) or len(amps) != 4 or not all(
            isinstance(p, (list, tuple)) and len(p) == 2 for p in amps
        ):
            raise ValidationError("state.amplitudes must be four [re, im] pairs")
        if self.options.get("theory") not in ("cpt", "dirac"):
            raise ValidationError("options.theory must be 'cpt' or 'dirac'")
        if str(self.options.get("log_base", "2")) != "2":
            raise ValidationError("options.log_base is fixed to '2'")
        try:
            steps = int(self.times["steps"])
            start, stop = float(self.times["start"]), float(self.times["stop"])
            int(self.options.get("seed", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad times/options: {exc}") from exc
        if steps < 1:
            raise ValidationError("times.steps must be at least 1")
        if not (math.isfinite(start) and math.isfinite(stop)) or stop < start:
            raise ValidationError("times need finite start <= stop")

    def to_dict(self):
        return dataclasses.asdict(self)

    def params(self, which):
        return PTParams(**{k: float(v) for k, v in getattr(self, which).items()})

    def amplitudes(self):
        return np.array([complex(float(re), float(im)) for re, im in self.state["amplitudes"]])

    def time_grid(self):
        return np.linspace(float(self.times["start"]), float(self.times["stop"]), int(self.times["steps"]))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_scenario_args(p):
    p.add_argument("--config", help="scenario JSON file, or - for stdin")
    p.add_argument("--dump-config", action="store_true", help="print the effective scenario and exit")
    for k in (1, 2):
        for name in ("r", "s", "t", "theta"):
            p.add_argument(f"--{name}{k}", type=float, help=f"{name} of system {k} (radians for theta)")
    p.add_argument("--amplitudes", help="four amplitudes as re:im pairs, comma separated (e.g. 1:0,0:0,0:0,0:0)")
    p.add_argument("--basis", choices=("computational", "cpt-eigen"))
    p.add_argument("--t-start", type=float)
    p.add_argument("--t-stop", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--theory", choices=("cpt", "dirac"))
    p.add_argument("--seed", type=int)
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def _single_args(p):
    for name in ("r", "s", "t"):
        p.add_argument(f"--{name}", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=DEFAULT_THETA, help="radians")
    p.add_argument("--output", "-o")


def build_parser():
    parser = _Parser(prog="cpt-entangle", description="Entanglement of PT-symmetric qubits.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _single_args(sub.add_parser("spectrum", help="alpha, energies and metric eigenvalues"))
    _single_args(sub.add_parser("algebra-check", help="residuals of the C, P, T algebra"))

    p = sub.add_parser("singlet-sweep", help="Dirac singlet entropy under the CPT trace over an alpha grid")
    p.add_argument("--alpha-max", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--frame", choices=("computational", "metric"), default="computational")
    p.add_argument("--output", "-o")

    p = sub.add_parser("entropy", help="entanglement of the scenario state")
    _add_scenario_args(p)

    for name, text in (("evolve", "amplitudes and entropy along exp(-iHt)"), ("rate", "entanglement rate trajectory")):
        p = sub.add_parser(name, help=text)
        _add_scenario_args(p)
        p.add_argument("--full", action="store_true", help="evolve under H1 (x) H2 instead of its nonlocal part")

    p = sub.add_parser("hmax", help="entangling capability h_max")
    _add_scenario_args(p)
    p.add_argument("--full", action="store_true", help="use H1 (x) H2 instead of its nonlocal part")
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--grid", type=int, default=24)
    return parser


def _load_config(args, stdin):
    if args.config:
        try:
            if args.config == "-":
                raw = json.load(stdin)
            else:
                with open(args.config, encoding="utf-8") as fh:
                    raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read scenario: {exc}") from exc
        cfg = ScenarioConfig.from_dict(raw)
    else:
        cfg = ScenarioConfig()
    for k in (1, 2):
        for name in ("r", "s", "t", "theta"):
            val = getattr(args, f"{name}{k}")
            if val is not None:
                getattr(cfg, f"system{k}")[name] = val
    if args.amplitudes:
        try:
            pairs = [[float(x) for x in item.split(":")] for item in args.amplitudes.split(",")]
        except ValueError as exc:
            raise ValidationError(f"bad --amplitudes: {exc}") from exc
        cfg.state["amplitudes"] = pairs
    if args.basis:
        cfg.state["basis"] = args.basis
    for flag, key in (("t_start", "start"), ("t_stop", "stop"), ("steps", "steps")):
        if getattr(args, flag) is not None:
            cfg.times[key] = getattr(args, flag)
    if args.theory:
        cfg.options["theory"] = args.theory
    if args.seed is not None:
        cfg.options["seed"] = args.seed
    cfg.validate()
    return cfg


def _pairs(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).ravel()]


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows):
    from io import StringIO

    buf = StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(x) for x in row])
    return buf.getvalue()


def _cmd_spectrum(args):
    params = PTParams(args.r, args.s, args.t, args.theta)
    system = build(params, spectrum_only=not params.symmetric)
    return _json(
        {
            "params": dataclasses.asdict(params),
            "alpha": system.alpha,
            "energies": list(system.energies),
            "metric_eigenvalues": None if system.space is None else [float(x) for x in system.space.eigenvalues],
        }
    )


def _cmd_algebra(args):
    system = build(PTParams(args.r, args.s, args.t, args.theta))
    report = verify_algebra(system)
    ok = max(report.values()) <= ALGEBRA_TOL
    return _json({"alpha": system.alpha, "residuals": report, "tolerance": ALGEBRA_TOL, "ok": ok}), (0 if ok else 2)


def _cmd_singlet_sweep(args):
    if args.steps < 1:
        raise ValidationError("--steps must be at least 1")
    rows = []
    for alpha in np.linspace(0.0, args.alpha_max, args.steps):
        pipeline = singlet_entropy_pipeline(alpha, frame=args.frame)
        try:
            closed = singlet_entropy_closed_form(alpha)
        except UnphysicalState:
            closed = math.nan
        rows.append((alpha, closed, pipeline, closed - pipeline))
    return _csv(["alpha", "E_closed_form", "E_pipeline", "delta"], rows)


def _systems(cfg):
    return build(cfg.params("system1")), build(cfg.params("system2"))


def _initial_state(cfg, sys1, sys2):
    amps = cfg.amplitudes()
    if cfg.state["basis"] == "cpt-eigen":
        return eigen_product_state(amps, sys1, sys2)
    return amps


def _cmd_entropy(cfg):
    sys1, sys2 = _systems(cfg)
    theory = cfg.options["theory"]
    s1, s2 = (sys1.space, sys2.space) if theory == "cpt" else (MetricSpace.identity(2), MetricSpace.identity(2))
    psi = _initial_state(cfg, sys1, sys2)
    scale = norm(tensor_space(s1, s2), psi)
    psi = psi / scale
    # the closed form needs amplitudes in an orthonormal product basis of the chosen theory
    native = (theory == "cpt") == (cfg.state["basis"] == "cpt-eigen") or (
        sys1.space.is_identity and sys2.space.is_identity
    )
    closed = None
    amps = cfg.amplitudes() / scale
    if native:
        closed = two_ptqubit_entanglement(*amps)
    sf = schmidt(psi, s1, s2)
    return _json(
        {
            "theory": theory,
            "basis": cfg.state["basis"],
            "pipeline": entanglement_entropy(psi, s1, s2),
            "closed_form": closed,
            "schmidt_coefficients": [float(c) for c in sf.coefficients],
            "is_product": bool(is_product(*amps)) if native else None,
        }
    )


def _generator(cfg, full):
    sys1, sys2 = _systems(cfg)
    ph = product_hamiltonian(sys1, sys2)
    return sys1, sys2, ph, (ph.matrix if full else ph.nonlocal_part)


def _cmd_evolve(cfg, full):
    sys1, sys2, _, h = _generator(cfg, full)
    res = evolve(h, _initial_state(cfg, sys1, sys2), cfg.time_grid(), sys1.space, sys2.space)
    header = ["t"]
    for label in ("00", "01", "10", "11"):
        header += [f"re_{label}", f"im_{label}"]
    header.append("E")
    rows = []
    for t, psi, e in zip(res.times, res.states, res.entropies):
        row = [t]
        for z in psi:
            row += [z.real, z.imag]
        rows.append(row + [e])
    return _csv(header, rows)


def _cmd_rate(cfg, full):
    sys1, sys2, _, h = _generator(cfg, full)
    seed = int(cfg.options.get("seed", 0))
    hm = h_max(h, sys1.space, sys2.space, seed=seed).value
    samples = trajectory(h, _initial_state(cfg, sys1, sys2), sys1.space, sys2.space, cfg.time_grid(), h_max_value=hm)
    rows = [(s.t, s.lam, s.entropy, s.gamma, s.bound, s.lambda_closed_form) for s in samples]
    return _csv(["t", "lambda", "E", "gamma", "bound", "lambda_closed_form"], rows)


def _cmd_hmax(cfg, args):
    sys1, sys2, ph, h = _generator(cfg, args.full)
    seed = int(cfg.options.get("seed", 0))
    res = h_max(h, sys1.space, sys2.space, starts=args.starts, seed=seed, grid=args.grid)
    return _json(
        {
            "h_max": res.value,
            "a1": _pairs(res.a1),
            "b1": _pairs(res.b1),
            "product_closed_form": ph.coupling,
            "diagnostics": {
                "evaluations": res.evaluations,
                "starts": res.starts,
                "seed": seed,
                "multistart_value": res.multistart_value,
                "grid_value": res.grid_value,
                "grid_coarse_value": res.grid_coarse_value,
                "converged": res.converged,
            },
        }
    )


def _dispatch(args, stdin):
    cmd = args.command
    if cmd == "spectrum":
        return _cmd_spectrum(args), 0
    if cmd == "algebra-check":
        return _cmd_algebra(args)
    if cmd == "singlet-sweep":
        return _cmd_singlet_sweep(args), 0
    cfg = _load_config(args, stdin)
    if args.dump_config:
        return _json(cfg.to_dict()), 0
    if cmd == "entropy":
        return _cmd_entropy(cfg), 0
    if cmd == "evolve":
        return _cmd_evolve(cfg, args.full), 0
    if cmd == "rate":
        return _cmd_rate(cfg, args.full), 0
    return _cmd_hmax(cfg, args), 0


def run(argv=None, stdout=None, stderr=None, stdin=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
        text, code = _dispatch(args, stdin)
    except CPTEntangleError as exc:
        code = 2 if isinstance(exc, NumericalError) else 1
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
        return code
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
