"""Command-line front end: run experiments, compile gates, demo tomography.

Subcommands
-----------
run            simulate a configured experiment, write per-step CSV/JSON
compile-ising  solve the Ising coefficients for a target conditional rotation
tomo-demo      simulate counts for a named state and reconstruct it
sweep          run one experiment per value of a swept parameter

Configs are flat ``key = value`` text files; command-line flags override
file values. Exit codes: 0 success, 1 violated internal invariant,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import tomography
from .dynamics import NoiseModel, SimConfig, StepRecord, run
from .ising import compile_controlled_rotation
from .measures import trace_distance
from .qstate import ID2, PHI_PLUS, InvariantViolation, dagger, density, eig_hermitian

SCHEMA_VERSION = "1"
CSV_HEADER = "step,eof_sa,entropy_e,negativity_se,ppt_se,purity"

_CONFIG_KEYS = ("regime", "steps", "alpha", "phases", "noise", "seed", "record_tomography")
_NOISE_KEYS = ("bs1_r_h", "bs1_r_v", "bs2_r_h", "bs2_r_v",
               "spurious_fraction", "phase_flip_fraction", "phase_pol_offset")


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def parse_kv_file(path: str) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    values: dict = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"{path}:{lineno}: empty key")
        values[key] = value
    return values


def _parse_bool(value: str, key: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ValueError(f"{key}: expected a boolean, got {value!r}")


def _parse_phases(value: str) -> tuple:
    value = value.strip()
    if not value:
        return ()
    try:
        return tuple(float(part) for part in value.split(","))
    except ValueError as exc:
        raise ValueError(f"phases: expected comma-separated floats, got {value!r}") from exc


def resolve_noise(spec: str) -> NoiseModel:
    """'off', 'paper-defaults', or a path to a key=value noise file."""
    if spec == "off":
        return NoiseModel()
    if spec == "paper-defaults":
        return NoiseModel.paper_defaults()
    raw = parse_kv_file(spec)
    unknown = set(raw) - set(_NOISE_KEYS)
    if unknown:
        raise ValueError(f"{spec}: unknown noise keys {sorted(unknown)}")
    fields = {key: float(val) for key, val in raw.items()}
    return NoiseModel(enabled=True, **fields)


def build_config(values: dict) -> SimConfig:
    """SimConfig from string-valued settings (file plus flag overrides)."""
    unknown = set(values) - set(_CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    kwargs: dict = {}
    if "regime" in values:
        kwargs["regime"] = values["regime"].strip()
    if "steps" in values:
        kwargs["steps"] = int(values["steps"])
    if "alpha" in values:
        kwargs["alpha"] = float(values["alpha"])
    if "phases" in values:
        kwargs["phases"] = _parse_phases(values["phases"])
    if "seed" in values:
        kwargs["seed"] = int(values["seed"])
    if "record_tomography" in values:
        kwargs["record_tomography"] = _parse_bool(values["record_tomography"],
                                                  "record_tomography")
    if "noise" in values:
        kwargs["noise"] = resolve_noise(values["noise"].strip())
    return SimConfig(**kwargs)


def _config_from_args(args) -> SimConfig:
    values: dict = {}
    if getattr(args, "config", None):
        file_values = parse_kv_file(args.config)
        spec = file_values.get("noise", "").strip()
        if spec and spec not in ("off", "paper-defaults") and not Path(spec).is_absolute():
            # noise file paths inside a config resolve against the config
            file_values["noise"] = str(Path(args.config).parent / spec)
        values.update(file_values)
    for key in ("regime", "steps", "alpha", "phases", "seed"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = str(flag)
    if getattr(args, "ideal", False):
        values["noise"] = "off"
    elif getattr(args, "noise", None):
        values["noise"] = args.noise
    if getattr(args, "tomography", False):
        values["record_tomography"] = "true"
    return build_config(values)


def _config_echo(cfg: SimConfig) -> dict:
    noise = cfg.noise
    return {
        "schema_version": SCHEMA_VERSION,
        "regime": cfg.regime,
        "steps": cfg.steps,
        "alpha": cfg.alpha,
        "phases": list(cfg.step_phases()),
        "seed": cfg.seed,
        "record_tomography": cfg.record_tomography,
        "noise": {
            "enabled": noise.enabled,
            "bs1_r_h": noise.bs1_r_h,
            "bs1_r_v": noise.bs1_r_v,
            "bs2_r_h": noise.bs2_r_h,
            "bs2_r_v": noise.bs2_r_v,
            "spurious_fraction": noise.spurious_fraction,
            "phase_flip_fraction": noise.phase_flip_fraction,
            "phase_pol_offset": noise.phase_pol_offset,
        },
    }


def render_csv(records: list[StepRecord]) -> str:
    lines = [f"# qstrobe-run-schema {SCHEMA_VERSION}", CSV_HEADER]
    for r in records:
        ppt = "true" if r.ppt_se else "false"
        lines.append(f"{r.step},{_fmt(r.eof_sa)},{_fmt(r.entropy_e)},"
                     f"{_fmt(r.negativity_se)},{ppt},{_fmt(r.purity_ase)}")
    return "\n".join(lines) + "\n"


def _matrix_json(m: np.ndarray) -> dict:
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def render_json(cfg: SimConfig, records: list[StepRecord]) -> str:
    steps = []
    for r in records:
        row = {
            "step": r.step,
            "eof_sa": r.eof_sa,
            "entropy_e": r.entropy_e,
            "negativity_se": r.negativity_se,
            "ppt_se": r.ppt_se,
            "purity": r.purity_ase,
        }
        if r.reconstructed_sa is not None:
            row["reconstructed_sa"] = _matrix_json(r.reconstructed_sa)
        steps.append(row)
    payload = {"config": _config_echo(cfg), "steps": steps}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    records = run(cfg)
    text = render_csv(records) if args.format == "csv" else render_json(cfg, records)
    _write_output(text, args.out)
    return 0


def _print_matrix(name: str, m: np.ndarray, file) -> None:
    print(f"{name}:", file=file)
    with np.printoptions(precision=9, suppress=True, linewidth=120):
        print(np.array2string(np.round(m, 12)), file=file)


def cmd_compile_ising(args) -> int:
    gate = compile_controlled_rotation(args.phi, args.n, args.tau)
    p = gate.params
    out = sys.stdout
    print(f"phi_target = {_fmt(args.phi)}", file=out)
    print(f"n = {gate.n}", file=out)
    print(f"tau = {_fmt(p.tau)}", file=out)
    print(f"j = {_fmt(p.j)}", file=out)
    print(f"eps_s_y = {_fmt(p.eps_s_y)}", file=out)
    print(f"eps_s_z = {_fmt(p.eps_s_z)}", file=out)
    print(f"eps_s_x = {_fmt(p.eps_s_x)}", file=out)
    print(f"eps_e_x = {_fmt(p.eps_e_x)}", file=out)
    print(f"residual_u0 = {gate.residual_u0:.3e}", file=out)
    print(f"residual_u1 = {gate.residual_u1:.3e}", file=out)
    _print_matrix("u0", gate.u0, out)
    _print_matrix("u1", gate.u1, out)
    _print_matrix("conditional gate ((E,S) order)", gate.conditional, out)
    return 0


def _uhlmann_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    w, v = eig_hermitian(a)
    sqrt_a = (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)
    w2, _ = eig_hermitian(sqrt_a @ b @ sqrt_a)
    return float(np.sum(np.sqrt(np.clip(w2, 0.0, None))) ** 2)


def _demo_state(args) -> np.ndarray:
    name = args.state
    if name == "bell":
        return density(PHI_PLUS)
    if name == "mixed":
        return np.kron(ID2, ID2) / 4
    if name.startswith("step-"):
        try:
            k = int(name.split("-", 1)[1])
        except ValueError as exc:
            raise ValueError(f"unknown state name {name!r}") from exc
        cfg = _config_from_args(args)
        if k < 0 or k > cfg.steps:
            raise ValueError(f"state {name!r}: step outside the configured {cfg.steps}-step run")
        return run(cfg)[k].rho_sa
    raise ValueError(f"unknown state name {name!r}")


def cmd_tomo_demo(args) -> int:
    rho = _demo_state(args)
    ps = tomography.two_qubit_polarization_projectors()
    if args.counts > 0:
        seed = args.seed if args.seed is not None else 0
        counts = tomography.simulate_counts(rho, ps, args.counts, "poisson", seed)
    else:
        counts = tomography.simulate_counts(rho, ps, 10_000, "none")
    estimate = tomography.reconstruct_linear(counts, ps)
    reconstructed = tomography.project_to_physical(estimate)
    out = sys.stdout
    print(f"state = {args.state}", file=out)
    mode = f"poisson, {args.counts} counts/projector, seed {seed}" if args.counts > 0 \
        else "noiseless"
    print(f"counts = {mode}", file=out)
    _print_matrix("true state", rho, out)
    _print_matrix("reconstructed state", reconstructed, out)
    print(f"fidelity = {_fmt(_uhlmann_fidelity(rho, reconstructed))}", file=out)
    print(f"trace_distance = {_fmt(trace_distance(rho, reconstructed))}", file=out)
    return 0


def _sweep_value(param: str, raw: str):
    if param in ("steps", "seed"):
        return int(raw)
    return float(raw)


def cmd_sweep(args) -> int:
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ValueError("sweep: --values is empty")
    base = _config_from_args(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    def one(raw: str) -> Path:
        cfg_kwargs = {
            "steps": base.steps, "alpha": base.alpha, "phases": base.phases,
            "regime": base.regime, "noise": base.noise, "seed": base.seed,
            "record_tomography": base.record_tomography,
        }
        cfg_kwargs[args.param] = _sweep_value(args.param, raw)
        cfg = SimConfig(**cfg_kwargs)
        records = run(cfg)
        path = out_dir / f"{args.param}-{raw}.{args.format}"
        text = render_csv(records) if args.format == "csv" else render_json(cfg, records)
        path.write_text(text, newline="\n")
        return path

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            paths = list(pool.map(one, values))
    else:
        paths = [one(v) for v in values]
    for path in paths:
        print(f"wrote {path}")
    return 0


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--regime", choices=["coherent", "reset"])
    parser.add_argument("--steps", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--phases", help="comma-separated per-step phases (radians)")
    parser.add_argument("--seed", type=int)
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument("--ideal", action="store_true", help="disable all imperfections")
    noise.add_argument("--noise", help="off | paper-defaults | path to a noise file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qstrobe",
        description="Stroboscopic system-environment simulator with an "
                    "entanglement-revival witness of non-Markovianity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate an experiment and export per-step data")
    _add_run_flags(p_run)
    p_run.add_argument("--tomography", action="store_true",
                       help="also reconstruct the S-A state at every step")
    p_run.add_argument("--out", help="output path (default: stdout)")
    p_run.add_argument("--format", choices=["csv", "json"], default="csv")
    p_run.set_defaults(func=cmd_run)

    p_ising = sub.add_parser("compile-ising",
                             help="Ising coefficients for a target conditional rotation")
    p_ising.add_argument("--phi", type=float, required=True, help="target angle (radians)")
    p_ising.add_argument("--n", type=int, default=1, help="resonance index (default 1)")
    p_ising.add_argument("--tau", type=float, default=1.0, help="gate time (default 1)")
    p_ising.set_defaults(func=cmd_compile_ising)

    p_tomo = sub.add_parser("tomo-demo", help="simulate and reconstruct a named state")
    p_tomo.add_argument("--state", required=True,
                        help="bell | mixed | step-K (uses the run flags below)")
    p_tomo.add_argument("--counts", type=int, default=0,
                        help="Poisson counts per projector; 0 = noiseless (default)")
    _add_run_flags(p_tomo)
    p_tomo.set_defaults(func=cmd_tomo_demo)

    p_sweep = sub.add_parser("sweep", help="one run per value of a swept parameter")
    p_sweep.add_argument("--param", choices=["alpha", "steps", "seed"], required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--jobs", type=int, default=1, help="concurrent runs")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
