"""Command-line front end: named experiment sweeps with CSV/JSON output.

Subcommands:
  run <experiment>   execute one named sweep and emit records
  list-experiments   print the available experiment names
  version            print the package version

Flags override values from an optional flat key=value config file
(--config).  Grids use the syntax start:stop:count where endpoints may
be pi expressions ("pi", "pi/2", "2pi", "0.25pi").  Output is byte
deterministic for identical configurations (including the Monte-Carlo
seed); the environment variable QMETRO_OUT_DIR prefixes relative
output paths.

Exit codes: 0 success, 2 configuration error, 3 computation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .estimate import (
    DistributionFamily,
    classical_fisher,
    cramer_rao,
    error_propagation,
    povm_family,
    projective_povm,
    qfi_from_family,
    qfi_generator,
    run_monte_carlo,
)
from .interferom import (
    mz_single_particle,
    mz_two_mode,
    optimal_readout_rotation,
    parity_expectation,
    parity_sector_povm,
    phase_sweep,
    ramsey,
)
from .spinops import Observable, collective_ops, moments, rotate
from .squeeze import (
    BjjParams,
    OatParams,
    bjj_hamiltonian,
    classify_regime,
    ground_state,
    oat_evolve,
    squeezing_parameters,
)
from .statelib import css, ecs, ghz, twin_fock

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

EXPERIMENTS = (
    "mz-single",
    "ramsey-css",
    "ramsey-sss",
    "noon-qfi",
    "ecs-qfi",
    "twinfock-parity",
    "bjj-ground",
    "oat-squeeze",
    "monte-carlo",
)

ENV_OUT_DIR = "QMETRO_OUT_DIR"

_CONFIG_KEYS = (
    "n",
    "phi",
    "alpha",
    "chi",
    "omega",
    "delta",
    "ec",
    "jtun",
    "t",
    "v",
    "seed",
    "out",
    "format",
)


class ConfigError(Exception):
    """Configuration problem; maps to exit code 2."""


_PI_TOKEN = re.compile(
    r"^(?P<sign>[+-]?)(?P<mult>\d+\.?\d*|\.\d+)?\s*\*?\s*(?P<pi>pi)?"
    r"(?:/(?P<div>\d+\.?\d*|\.\d+))?$"
)


def parse_scalar(text: str) -> float:
    """Parse a float or a pi expression like 'pi', '2pi', 'pi/2', '0.25pi'."""
    token = text.strip().lower()
    m = _PI_TOKEN.match(token)
    if not m or (m.group("mult") is None and m.group("pi") is None):
        raise ConfigError(f"cannot parse number {text!r}")
    value = float(m.group("mult")) if m.group("mult") else 1.0
    if m.group("pi"):
        value *= math.pi
    elif m.group("mult") is None:
        raise ConfigError(f"cannot parse number {text!r}")
    if m.group("div"):
        divisor = float(m.group("div"))
        if divisor == 0:
            raise ConfigError(f"division by zero in {text!r}")
        value /= divisor
    if m.group("sign") == "-":
        value = -value
    return value


def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:count' into an inclusive linspace, or a single value."""
    parts = text.strip().split(":")
    if len(parts) == 1:
        return np.array([parse_scalar(parts[0])])
    if len(parts) != 3:
        raise ConfigError(f"grid spec must be start:stop:count, got {text!r}")
    start, stop = parse_scalar(parts[0]), parse_scalar(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid count must be an integer, got {parts[2]!r}")
    if count < 1:
        raise ConfigError("grid is empty")
    return np.linspace(start, stop, count)


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"cannot parse integer list {text!r}")
    if not values:
        raise ConfigError("empty integer list")
    if any(v < 1 for v in values):
        raise ConfigError("particle numbers must be positive")
    return values


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(parse_scalar(tok) for tok in text.split(",") if tok.strip())
    except ConfigError:
        raise
    if not values:
        raise ConfigError("empty list")
    return values


@dataclass
class SweepConfig:
    """Resolved configuration of one experiment sweep."""

    experiment: str
    n_list: tuple[int, ...] = (10,)
    phi: str = "0.05:3.0915926535897931:100"
    alpha: str = "0.5,1,2"
    chi: float = 0.01
    omega: float = 0.0
    delta: float = 0.0
    ec: float = 0.0
    jtun: float = 1.0
    t: str = "1"
    v: Optional[int] = None
    seed: int = 0
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if self.v is not None and self.v < 1:
            raise ConfigError("repetitions v must be >= 1")

    def phi_grid(self) -> np.ndarray:
        grid = parse_grid(self.phi)
        if grid.size == 0:
            raise ConfigError("phi grid is empty")
        return grid

    def t_grid(self) -> np.ndarray:
        grid = parse_grid(self.t)
        if grid.size == 0:
            raise ConfigError("t grid is empty")
        return grid

    def output_path(self) -> Optional[str]:
        if self.out is None:
            return None
        base = os.environ.get(ENV_OUT_DIR)
        if base and not os.path.isabs(self.out):
            return os.path.join(base, self.out)
        return self.out


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(
                        f"{path}:{lineno}: expected 'key = value', got {line!r}"
                    )
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}")
    return values


def parse_config(args: argparse.Namespace) -> SweepConfig:
    """Merge config-file values and command-line flags (flags win)."""
    merged = {}
    if args.config:
        merged.update(_read_config_file(args.config))
    for key in _CONFIG_KEYS:
        attr = "fmt" if key == "format" else key
        flag_value = getattr(args, attr, None)
        if flag_value is not None:
            merged[key] = flag_value

    resolved: dict = {}
    try:
        if "n" in merged:
            resolved["n_list"] = _parse_int_list(str(merged["n"]))
        for key in ("phi", "alpha", "t", "out"):
            if key in merged:
                resolved[key] = str(merged[key])
        for key in ("chi", "omega", "delta", "ec", "jtun"):
            if key in merged:
                resolved[key] = parse_scalar(str(merged[key]))
        for key in ("v", "seed"):
            if key in merged:
                resolved[key] = int(merged[key])
        if "format" in merged:
            resolved["fmt"] = str(merged["format"])
    except ValueError as exc:
        raise ConfigError(str(exc))

    cfg = SweepConfig(experiment=args.experiment, **resolved)
    cfg.phi_grid()  # validate grids eagerly so bad specs exit with code 2
    cfg.t_grid()
    _parse_float_list(cfg.alpha)
    return cfg


# ---------------------------------------------------------------------------
# experiment runners: each returns (columns, rows, summary line)


@dataclass
class ResultRecord:
    """One sweep point; fields not produced by an experiment stay None."""

    experiment: str
    n: Optional[int] = None
    phi: Optional[float] = None
    alpha: Optional[float] = None
    t: Optional[float] = None
    chi: Optional[float] = None
    classical_fisher: Optional[float] = None
    qfi: Optional[float] = None
    crb: Optional[float] = None
    qcrb: Optional[float] = None
    delta_theta_errorprop: Optional[float] = None
    xi_h_sq: Optional[float] = None
    xi_s_sq: Optional[float] = None
    xi_r_sq: Optional[float] = None
    parity: Optional[float] = None
    regime: Optional[str] = None
    ground_energy: Optional[float] = None
    gap: Optional[float] = None
    ground_degenerate: Optional[bool] = None
    css_overlap: Optional[float] = None
    theta_true: Optional[float] = None
    v: Optional[int] = None
    seed: Optional[int] = None
    trials: Optional[int] = None
    bias: Optional[float] = None
    mse: Optional[float] = None
    crb_variance: Optional[float] = None

    def cell(self, column: str):
        return getattr(self, column)


def _jz_observable(n: int) -> Observable:
    ops = collective_ops(n)
    return Observable(ops.jz, ops.basis_tag)


def _min_summary(rows, column, swept="phi"):
    finite = [r for r in rows if r.cell(column) is not None and math.isfinite(r.cell(column))]
    if not finite:
        return f"no finite {column} in sweep"
    best = min(finite, key=lambda r: r.cell(column))
    where = best.cell(swept)
    return f"min {column} = {best.cell(column):.6g} at {swept} = {where:.6g}"


def _run_mz_single(cfg: SweepConfig):
    grid = cfg.phi_grid()

    def family(phi):
        # explicit 2x2 pipeline state, for the quantum Fisher information
        psi = np.array([1.0, 0.0], dtype=complex)
        splitter = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        psi = splitter @ psi
        psi = np.array([psi[0], np.exp(1j * phi) * psi[1]])
        return splitter @ psi

    prob_family = DistributionFamily(
        outcome_labels=("a", "b"),
        prob_at=lambda phi: np.array(mz_single_particle(phi)),
    )

    def signal(phi):
        pa, pb = mz_single_particle(phi)
        return pa - pb

    def noise(phi):
        pa, pb = mz_single_particle(phi)
        mean = pa - pb
        return math.sqrt(max(0.0, 1.0 - mean * mean))

    rows = []
    for phi in grid:
        fisher = classical_fisher(prob_family, phi)
        qfi = qfi_from_family(family, phi)
        prop = error_propagation(signal, noise, phi)
        rows.append(
            ResultRecord(
                experiment=cfg.experiment,
                n=1,
                phi=float(phi),
                classical_fisher=fisher,
                qfi=qfi,
                crb=cramer_rao(fisher, cfg.v or 1),
                qcrb=cramer_rao(qfi, cfg.v or 1),
                delta_theta_errorprop=prop.value,
            )
        )
    columns = (
        "experiment",
        "n",
        "phi",
        "classical_fisher",
        "qfi",
        "crb",
        "qcrb",
        "delta_theta_errorprop",
    )
    return columns, rows, _min_summary(rows, "delta_theta_errorprop")


def _run_ramsey_css(cfg: SweepConfig):
    grid = cfg.phi_grid()
    rows = []
    for n in cfg.n_list:
        initial = css(n, 0.0, 0.0)
        povm = projective_povm(initial.basis_tag)
        jz = _jz_observable(n)
        reports = phase_sweep(
            lambda phi: ramsey(initial, phi), povm, jz, grid, repetitions=cfg.v or 1
        )
        for rep in reports:
            rows.append(
                ResultRecord(
                    experiment=cfg.experiment,
                    n=n,
                    phi=rep.theta,
                    classical_fisher=rep.classical_fisher,
                    qfi=rep.quantum_fisher,
                    crb=rep.crb,
                    qcrb=rep.qcrb,
                    delta_theta_errorprop=rep.error_prop,
                )
            )
    columns = (
        "experiment",
        "n",
        "phi",
        "classical_fisher",
        "qfi",
        "crb",
        "qcrb",
        "delta_theta_errorprop",
    )
    return columns, rows, _min_summary(rows, "delta_theta_errorprop")


def _prepare_squeezed_probe(n: int, chi: float, t: float):
    """One-axis-twisted coherent state, mean spin along -z, squeezed
    quadrature aligned with y (the variance the Ramsey chain reads out)."""
    equator = css(n, math.pi / 2.0, 0.0)
    twisted = oat_evolve(equator, OatParams(chi=chi, t=t))
    probe = rotate(twisted, (0.0, 1.0, 0.0), math.pi / 2.0)
    direction = squeezing_parameters(probe).min_perp_direction
    beta = math.atan2(direction[0], direction[1])  # bring it onto the y axis
    return rotate(probe, (0.0, 0.0, 1.0), beta)


def _run_ramsey_sss(cfg: SweepConfig):
    grid = cfg.phi_grid()
    t = float(cfg.t_grid()[0])
    rows = []
    for n in cfg.n_list:
        probe = _prepare_squeezed_probe(n, cfg.chi, t)
        report = squeezing_parameters(probe)
        jz = _jz_observable(n)
        povm = projective_povm(probe.basis_tag)
        reports = phase_sweep(
            lambda phi: ramsey(probe, phi), povm, jz, grid, repetitions=cfg.v or 1
        )
        for rep in reports:
            rows.append(
                ResultRecord(
                    experiment=cfg.experiment,
                    n=n,
                    phi=rep.theta,
                    chi=cfg.chi,
                    t=t,
                    classical_fisher=rep.classical_fisher,
                    qfi=rep.quantum_fisher,
                    crb=rep.crb,
                    qcrb=rep.qcrb,
                    delta_theta_errorprop=rep.error_prop,
                    xi_h_sq=report.xi_h_sq,
                    xi_s_sq=report.xi_s_sq,
                    xi_r_sq=report.xi_r_sq,
                )
            )
    columns = (
        "experiment",
        "n",
        "phi",
        "chi",
        "t",
        "classical_fisher",
        "qfi",
        "crb",
        "qcrb",
        "delta_theta_errorprop",
        "xi_h_sq",
        "xi_s_sq",
        "xi_r_sq",
    )
    return columns, rows, _min_summary(rows, "delta_theta_errorprop")


def _run_noon_qfi(cfg: SweepConfig):
    rows = []
    for n in cfg.n_list:
        state = ghz(n)
        qfi = qfi_generator(state, _jz_observable(n))
        rows.append(
            ResultRecord(
                experiment=cfg.experiment,
                n=n,
                qfi=qfi,
                qcrb=cramer_rao(qfi, cfg.v or 1),
            )
        )
    columns = ("experiment", "n", "qfi", "qcrb")
    return columns, rows, _min_summary(rows, "qcrb", swept="n")


def _run_ecs_qfi(cfg: SweepConfig):
    rows = []
    for alpha in _parse_float_list(cfg.alpha):
        state = ecs(alpha)
        dim = state.cutoff + 1
        n_b = np.tile(np.arange(dim), (dim, 1)).reshape(-1)
        base = state.vector

        def family(phi):
            return np.exp(1j * phi * n_b) * base

        qfi = qfi_from_family(family, 0.0)
        rows.append(
            ResultRecord(
                experiment=cfg.experiment,
                alpha=float(alpha),
                qfi=qfi,
                qcrb=cramer_rao(qfi, cfg.v or 1),
            )
        )
    columns = ("experiment", "alpha", "qfi", "qcrb")
    return columns, rows, _min_summary(rows, "qcrb", swept="alpha")


def _run_twinfock_parity(cfg: SweepConfig):
    grid = cfg.phi_grid()
    rows = []
    for n in cfg.n_list:
        probe = twin_fock(n)
        povm = parity_sector_povm("b", probe.cutoff)

        def family(phi):
            return mz_two_mode(probe, phi)

        def signal(phi):
            return parity_expectation(family(phi), "b")

        def noise(phi):
            mean = signal(phi)
            return math.sqrt(max(0.0, 1.0 - mean * mean))

        prob_family = povm_family(family, povm, labels=("even", "odd"))
        for phi in grid:
            fisher = classical_fisher(prob_family, phi)
            qfi = qfi_from_family(family, phi)
            prop = error_propagation(signal, noise, phi)
            rows.append(
                ResultRecord(
                    experiment=cfg.experiment,
                    n=n,
                    phi=float(phi),
                    parity=signal(float(phi)),
                    classical_fisher=fisher,
                    qfi=qfi,
                    crb=cramer_rao(fisher, cfg.v or 1),
                    qcrb=cramer_rao(qfi, cfg.v or 1),
                    delta_theta_errorprop=prop.value,
                )
            )
    columns = (
        "experiment",
        "n",
        "phi",
        "parity",
        "classical_fisher",
        "qfi",
        "crb",
        "qcrb",
        "delta_theta_errorprop",
    )
    return columns, rows, _min_summary(rows, "delta_theta_errorprop")


def _run_bjj_ground(cfg: SweepConfig):
    rows = []
    for n in cfg.n_list:
        params = BjjParams(
            n_particles=n,
            tunneling=cfg.jtun,
            imbalance=cfg.delta,
            charging_energy=cfg.ec,
        )
        hamiltonian = bjj_hamiltonian(params)
        spectrum = ground_state(hamiltonian)
        regime = classify_regime(params)
        reference = css(n, math.pi / 2.0, 0.0)
        overlap = abs(np.vdot(reference.amplitudes, spectrum.states[:, 0])) ** 2
        rows.append(
            ResultRecord(
                experiment=cfg.experiment,
                n=n,
                regime=regime.value,
                ground_energy=spectrum.ground_energy,
                gap=spectrum.gap,
                ground_degenerate=spectrum.ground_degenerate,
                css_overlap=float(overlap),
            )
        )
    columns = (
        "experiment",
        "n",
        "regime",
        "ground_energy",
        "gap",
        "ground_degenerate",
        "css_overlap",
    )
    return columns, rows, _min_summary(rows, "gap", swept="n")


def _run_oat_squeeze(cfg: SweepConfig):
    rows = []
    for n in cfg.n_list:
        initial = css(n, math.pi / 2.0, 0.0)
        for t in cfg.t_grid():
            evolved = oat_evolve(initial, OatParams(chi=cfg.chi, t=float(t)))
            report = squeezing_parameters(evolved)
            rows.append(
                ResultRecord(
                    experiment=cfg.experiment,
                    n=n,
                    t=float(t),
                    chi=cfg.chi,
                    xi_h_sq=report.xi_h_sq,
                    xi_s_sq=report.xi_s_sq,
                    xi_r_sq=report.xi_r_sq,
                )
            )
    columns = ("experiment", "n", "t", "chi", "xi_h_sq", "xi_s_sq", "xi_r_sq")
    return columns, rows, _min_summary(rows, "xi_r_sq", swept="t")


MONTE_CARLO_THETA_TRUE = 0.5
MONTE_CARLO_TRIALS = 200
MONTE_CARLO_INTERVAL = (0.01, 0.99)


def _run_monte_carlo(cfg: SweepConfig):
    family = DistributionFamily(
        outcome_labels=("success", "failure"),
        prob_at=lambda theta: np.array([theta, 1.0 - theta]),
        derivative=lambda theta: np.array([1.0, -1.0]),
    )
    v = cfg.v or 10_000
    run = run_monte_carlo(
        family,
        MONTE_CARLO_THETA_TRUE,
        v,
        MONTE_CARLO_TRIALS,
        cfg.seed,
        MONTE_CARLO_INTERVAL,
    )
    fisher = classical_fisher(family, MONTE_CARLO_THETA_TRUE)
    crb_variance = 1.0 / (v * fisher)
    rows = [
        ResultRecord(
            experiment=cfg.experiment,
            theta_true=MONTE_CARLO_THETA_TRUE,
            v=v,
            seed=cfg.seed,
            trials=MONTE_CARLO_TRIALS,
            classical_fisher=fisher,
            bias=run.bias,
            mse=run.mse,
            crb_variance=crb_variance,
        )
    ]
    columns = (
        "experiment",
        "theta_true",
        "v",
        "seed",
        "trials",
        "classical_fisher",
        "bias",
        "mse",
        "crb_variance",
    )
    summary = f"mse/crb = {run.mse / crb_variance:.6g} over {MONTE_CARLO_TRIALS} trials"
    return columns, rows, summary


_RUNNERS = {
    "mz-single": _run_mz_single,
    "ramsey-css": _run_ramsey_css,
    "ramsey-sss": _run_ramsey_sss,
    "noon-qfi": _run_noon_qfi,
    "ecs-qfi": _run_ecs_qfi,
    "twinfock-parity": _run_twinfock_parity,
    "bjj-ground": _run_bjj_ground,
    "oat-squeeze": _run_oat_squeeze,
    "monte-carlo": _run_monte_carlo,
}


# ---------------------------------------------------------------------------
# serialization: one schema, two encodings

def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def _json_cell(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(row.cell(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _render_json(columns, rows) -> str:
    payload = [{c: _json_cell(row.cell(c)) for c in columns} for row in rows]
    return json.dumps(payload, indent=2) + "\n"


def run_sweep(cfg: SweepConfig) -> int:
    """Execute a configured sweep, emit records, print a one-line summary."""
    runner = _RUNNERS[cfg.experiment]
    try:
        columns, rows, summary = runner(cfg)
    except ConfigError:
        raise
    except Exception as exc:
        print(f"error: {cfg.experiment}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = _render_csv(columns, rows) if cfg.fmt == "csv" else _render_json(columns, rows)
    path = cfg.output_path()
    if path is None:
        sys.stdout.write(text)
        print(f"{cfg.experiment}: {summary}", file=sys.stderr)
    else:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"{cfg.experiment}: {summary} -> {path}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmetro",
        description="Deterministic quantum-metrology experiment sweeps.",
    )
    sub = parser.add_subparsers(dest="command")

    runp = sub.add_parser("run", help="run a named experiment sweep")
    runp.add_argument("experiment", help="experiment name (see list-experiments)")
    runp.add_argument("--n", help="comma-separated particle numbers")
    runp.add_argument("--phi", help="phase grid start:stop:count (pi literals ok)")
    runp.add_argument("--alpha", help="comma-separated coherent amplitudes")
    runp.add_argument("--chi", help="one-axis-twisting nonlinearity")
    runp.add_argument("--omega", help="linear coupling strength")
    runp.add_argument("--delta", help="detuning / imbalance")
    runp.add_argument("--ec", help="charging energy")
    runp.add_argument("--jtun", help="tunneling strength")
    runp.add_argument("--t", help="evolution time (scalar or grid)")
    runp.add_argument("--v", help="number of repetitions for the bounds")
    runp.add_argument("--seed", help="Monte-Carlo seed")
    runp.add_argument("--out", help="output file (QMETRO_OUT_DIR prefixes relative paths)")
    runp.add_argument("--format", dest="fmt", choices=("csv", "json"), help="csv or json")
    runp.add_argument("--config", help="flat key=value config file")

    sub.add_parser("list-experiments", help="print available experiment names")
    sub.add_parser("version", help="print the package version")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG
    if args.command == "list-experiments":
        for name in EXPERIMENTS:
            print(name)
        return EXIT_OK
    if args.command == "version":
        print(__version__)
        return EXIT_OK
    try:
        cfg = parse_config(args)
        return run_sweep(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
