"""Configuration-driven experiment orchestration and CSV emission.

A run is described either by a named preset or by an INI-style config file
with the sections below (matrices and node tables are whitespace-separated
rows on indented continuation lines):

    [network]
    # either a complete graph ...
    preset = complete
    nodes = 6
    weight = 1.0
    # ... or an inline weight matrix
    # weights =
    #     0 1
    #     1 0

    [nodes]
    # one row per node: alpha beta gamma omega pos0 vel0
    table =
        0.46 1.16 0.58 0.31 -1.4 0.3
        ...

    [protocol]
    kind = full_state        # none | full_state | partial_state | hkb
    c = 0.15                 # partial_state uses c1/c2, hkb uses a/b/c

    [entrainment]
    enabled = true
    amplitude = 0.3
    frequency = 0.5

    [simulation]
    duration = 200.0
    dt = 0.01
    seed = 0

    [bounds]                 # optional Lyapunov-bound inputs
    quad = true
    p11 = 0.077
    p22 = 0.077
    w11 = 0.001
    w22 = 0.045
    z1_max =                 # default: measured from the run
    z2_max =

    [sweep]                  # optional grid over scalar fields
    field = protocol.c
    values = 0.05 0.1 0.15
    field2 = entrainment.amplitude
    values2 = 0.1 0.2

    [output]
    directory = out

All emitted CSVs are UTF-8 with LF line endings, one header row, and reals
printed with 9 significant digits.  Identical config and seed reproduce
byte-identical files.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bounds as bounds_mod
from . import presets
from .dynamics import (
    CouplingProtocol,
    Entrainment,
    FullState,
    HkbCoupling,
    NoCoupling,
    OscillatorParams,
    PartialState,
    Trajectory,
    integrate,
    state_extrema,
)
from .graph import (
    Topology,
    TopologyError,
    complete_graph,
    normalized_neighbor_laplacian,
    spectrum,
)
from .metrics import SyncReport, compute_sync_report
from .phase import PhaseSeries, phases_from_trajectory


class ConfigError(ValueError):
    """Malformed run configuration; the message names the section and field."""


@dataclass(frozen=True)
class SweepSpec:
    """Grid over one or two dotted scalar fields (e.g. protocol.c)."""

    field: str
    values: tuple[float, ...]
    field2: str | None = None
    values2: tuple[float, ...] = ()


@dataclass(frozen=True)
class BoundsOptions:
    """Inputs for the bound evaluation attached to a run.

    quad marks an explicit request for the Lyapunov certificate; it only
    affects validation diagnostics, since bounds evaluation reports the
    certificate whenever its hypotheses hold anyway.
    """

    quad: bool = False
    p11: float = 1.0
    p22: float = 1.0
    w11: float = 1e-6
    w22: float | None = None
    gamma1: float = 1.0
    gamma2: float = 1.0
    z1_max: float | None = None
    z2_max: float | None = None


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Everything needed to reproduce one deterministic run."""

    label: str
    topology: Topology
    params: tuple[OscillatorParams, ...]
    initial_states: np.ndarray
    protocol: CouplingProtocol
    entrainment: Entrainment = Entrainment.off()
    duration: float = 200.0
    dt: float = 0.01
    seed: int = 0
    out_dir: str = "out"
    sweep: SweepSpec | None = None
    bounds: BoundsOptions = BoundsOptions()


@dataclass(frozen=True, eq=False)
class RunResult:
    """Bundle produced by one run."""

    config: RunConfig
    trajectory: Trajectory
    phases: PhaseSeries
    report: SyncReport
    bounds_rows: tuple[tuple[str, float], ...]
    written: tuple[Path, ...] = ()


@dataclass(frozen=True, eq=False)
class SweepCell:
    """Outcome of one sweep grid point."""

    value1: float
    value2: float | None
    report: SyncReport | None
    diverged: bool
    seed: int


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------


def _rocking6(label: str, protocol: CouplingProtocol, entrainment: Entrainment = Entrainment.off()) -> RunConfig:
    return RunConfig(
        label=label,
        topology=presets.rocking6_topology(),
        params=presets.ROCKING6_PARAMS,
        initial_states=presets.ROCKING6_INITIAL,
        protocol=protocol,
        entrainment=entrainment,
    )


def _validation5() -> RunConfig:
    return RunConfig(
        label="validation5",
        topology=presets.validation5_topology(),
        params=presets.VALIDATION5_PARAMS,
        initial_states=presets.VALIDATION5_INITIAL,
        protocol=FullState(0.07),
        bounds=BoundsOptions(
            quad=True,
            p11=presets.VALIDATION5_P[0],
            p22=presets.VALIDATION5_P[1],
            w11=presets.VALIDATION5_W11,
            w22=presets.VALIDATION5_W22,
        ),
    )


PRESET_BUILDERS = {
    "rocking6-nc": lambda: _rocking6("rocking6-nc", NoCoupling()),
    "rocking6-fsc": lambda: _rocking6("rocking6-fsc", FullState(0.15)),
    "rocking6-psc": lambda: _rocking6("rocking6-psc", PartialState(0.15, 0.15)),
    "rocking6-hkb": lambda: _rocking6("rocking6-hkb", HkbCoupling(-1.0, -1.0, 0.15)),
    "rocking6": lambda: _rocking6("rocking6", FullState(0.15)),
    "validation5": _validation5,
}

PRESET_NAMES = tuple(sorted(PRESET_BUILDERS))


def preset_config(name: str) -> RunConfig:
    """Build one of the bundled scenario presets by name."""
    try:
        builder = PRESET_BUILDERS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}") from None
    return builder()


# ---------------------------------------------------------------------------
# Config file parsing
# ---------------------------------------------------------------------------


def _parse_matrix(text: str, section: str, option: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.strip().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append([float(tok) for tok in line.split()])
        except ValueError as exc:
            raise ConfigError(f"[{section}] {option}, row {lineno}: {exc}") from None
    if not rows:
        raise ConfigError(f"[{section}] {option}: no rows given")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ConfigError(f"[{section}] {option}: rows have unequal lengths")
    return np.array(rows)


def _get_float(cfg, section, option, default=None):
    if not cfg.has_option(section, option) or cfg.get(section, option).strip() == "":
        if default is None:
            raise ConfigError(f"[{section}] missing required field {option!r}")
        return default
    try:
        return cfg.getfloat(section, option)
    except ValueError:
        raise ConfigError(
            f"[{section}] {option}: not a number ({cfg.get(section, option)!r})"
        ) from None


def _get_opt_float(cfg, section, option):
    if not cfg.has_option(section, option) or cfg.get(section, option).strip() == "":
        return None
    return _get_float(cfg, section, option)


def _parse_values(text: str, section: str, option: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split())
    except ValueError as exc:
        raise ConfigError(f"[{section}] {option}: {exc}") from None


def _read_parser(path: Path) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, "r", encoding="utf-8") as handle:
            cfg.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error in {path}: {exc}") from None
    return cfg


def _protocol_from(cfg) -> CouplingProtocol:
    kind = cfg.get("protocol", "kind", fallback="none").strip().lower()
    try:
        if kind == "none":
            return NoCoupling()
        if kind == "full_state":
            return FullState(c=_get_float(cfg, "protocol", "c"))
        if kind == "partial_state":
            return PartialState(
                c1=_get_float(cfg, "protocol", "c1"),
                c2=_get_float(cfg, "protocol", "c2"),
            )
        if kind == "hkb":
            return HkbCoupling(
                a=_get_float(cfg, "protocol", "a"),
                b=_get_float(cfg, "protocol", "b"),
                c=_get_float(cfg, "protocol", "c"),
            )
    except ValueError as exc:
        raise ConfigError(f"[protocol] {exc}") from None
    raise ConfigError(f"[protocol] unknown kind {kind!r}")


def load_config(source: str | Path) -> RunConfig:
    """Resolve a preset name or parse a config file into a RunConfig."""
    name = str(source)
    if name in PRESET_BUILDERS:
        return preset_config(name)
    path = Path(source)
    if not path.exists():
        raise ConfigError(f"{name!r} is neither a preset name nor an existing config file")
    cfg = _read_parser(path)

    for required in ("network", "nodes"):
        if not cfg.has_section(required):
            raise ConfigError(f"missing required section [{required}]")

    # Topology: complete-graph shorthand or an inline matrix.
    if cfg.has_option("network", "weights"):
        weights = _parse_matrix(cfg.get("network", "weights"), "network", "weights")
        try:
            topology = Topology(weights)
        except TopologyError as exc:
            raise ConfigError(f"[network] weights: {exc}") from None
    elif cfg.get("network", "preset", fallback="").strip() == "complete":
        try:
            n = cfg.getint("network", "nodes")
        except (ValueError, configparser.NoOptionError):
            raise ConfigError("[network] preset=complete needs an integer 'nodes'") from None
        topology = complete_graph(n, _get_float(cfg, "network", "weight", default=1.0))
    else:
        raise ConfigError("[network] needs either 'weights' or 'preset = complete'")

    table = _parse_matrix(cfg.get("nodes", "table", fallback=""), "nodes", "table")
    if table.shape[1] != 6:
        raise ConfigError("[nodes] table rows must hold: alpha beta gamma omega pos0 vel0")
    if table.shape[0] != topology.n:
        raise ConfigError(
            f"[nodes] table has {table.shape[0]} rows but the topology has {topology.n} nodes"
        )
    try:
        params = tuple(OscillatorParams(*row[:4]) for row in table)
    except ValueError as exc:
        raise ConfigError(f"[nodes] table: {exc}") from None
    initial = table[:, 4:6].copy()

    entrainment = Entrainment.off()
    if cfg.has_section("entrainment"):
        try:
            entrainment = Entrainment(
                amplitude=_get_float(cfg, "entrainment", "amplitude", default=0.0),
                frequency=_get_float(cfg, "entrainment", "frequency", default=1.0),
                enabled=cfg.getboolean("entrainment", "enabled", fallback=False),
            )
        except ValueError as exc:
            raise ConfigError(f"[entrainment] {exc}") from None

    duration = _get_float(cfg, "simulation", "duration", default=200.0)
    dt = _get_float(cfg, "simulation", "dt", default=0.01)
    try:
        seed = cfg.getint("simulation", "seed", fallback=0)
    except ValueError:
        raise ConfigError("[simulation] seed: not an integer") from None

    sweep_spec = None
    if cfg.has_section("sweep") and cfg.has_option("sweep", "field"):
        values = _parse_values(cfg.get("sweep", "values", fallback=""), "sweep", "values")
        if not values:
            raise ConfigError("[sweep] needs a non-empty 'values' list")
        field2 = cfg.get("sweep", "field2", fallback="").strip() or None
        values2 = _parse_values(cfg.get("sweep", "values2", fallback=""), "sweep", "values2")
        if field2 and not values2:
            raise ConfigError("[sweep] field2 given without values2")
        sweep_spec = SweepSpec(
            field=cfg.get("sweep", "field").strip(),
            values=values,
            field2=field2,
            values2=values2,
        )

    bounds_opts = BoundsOptions()
    if cfg.has_section("bounds"):
        bounds_opts = BoundsOptions(
            quad=cfg.getboolean("bounds", "quad", fallback=True),
            p11=_get_float(cfg, "bounds", "p11", default=1.0),
            p22=_get_float(cfg, "bounds", "p22", default=1.0),
            w11=_get_float(cfg, "bounds", "w11", default=1e-6),
            w22=_get_opt_float(cfg, "bounds", "w22"),
            gamma1=_get_float(cfg, "bounds", "gamma1", default=1.0),
            gamma2=_get_float(cfg, "bounds", "gamma2", default=1.0),
            z1_max=_get_opt_float(cfg, "bounds", "z1_max"),
            z2_max=_get_opt_float(cfg, "bounds", "z2_max"),
        )

    return RunConfig(
        label=cfg.get("run", "label", fallback=path.stem),
        topology=topology,
        params=params,
        initial_states=initial,
        protocol=_protocol_from(cfg),
        entrainment=entrainment,
        duration=duration,
        dt=dt,
        seed=seed,
        out_dir=cfg.get("output", "directory", fallback="out"),
        sweep=sweep_spec,
        bounds=bounds_opts,
    )


def validate_config(source: str | Path | RunConfig) -> list[str]:
    """Collect diagnostics without running anything.

    Returns an empty list for a healthy configuration.  Structural problems
    that prevent even building the configuration surface as a single parse
    diagnostic rather than an exception.
    """
    diagnostics: list[str] = []
    if isinstance(source, RunConfig):
        cfg = source
    else:
        try:
            cfg = load_config(source)
        except ConfigError as exc:
            return [f"parse: {exc}"]

    if not cfg.topology.is_connected():
        diagnostics.append("network: topology is not connected")
    steps = cfg.duration / cfg.dt
    if abs(steps - round(steps)) > 1e-6:
        diagnostics.append(f"simulation: dt={cfg.dt} does not divide duration={cfg.duration}")
    proto = cfg.protocol
    if isinstance(proto, FullState) and proto.c == 0.0:
        diagnostics.append("protocol: full_state strength c is zero (coupling inactive)")
    if isinstance(proto, PartialState) and proto.c1 == 0.0 and proto.c2 == 0.0:
        diagnostics.append("protocol: both partial_state strengths are zero (coupling inactive)")
    if isinstance(proto, HkbCoupling) and proto.c == 0.0:
        diagnostics.append("protocol: hkb strength c is zero (coupling inactive)")
    if cfg.entrainment.enabled and cfg.entrainment.amplitude == 0.0:
        diagnostics.append("entrainment: enabled with zero amplitude (no effect)")
    if cfg.bounds.quad:
        gammas = [p.gamma for p in cfg.params]
        if max(gammas) - min(gammas) > 1e-9:
            diagnostics.append(
                "bounds: quad bound requested but gamma differs across nodes "
                "(certificate inapplicable)"
            )
    return diagnostics


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def simulate(config: RunConfig) -> RunResult:
    """Integrate, extract phases, and compute the full metric suite (no I/O)."""
    traj = integrate(
        config.params,
        config.topology,
        config.protocol,
        config.initial_states,
        config.duration,
        config.dt,
        entrainment=config.entrainment,
    )
    phases = phases_from_trajectory(traj)
    report = compute_sync_report(traj, entrainment=config.entrainment, phases=phases)
    rows = bounds_rows(config, traj)
    return RunResult(config=config, trajectory=traj, phases=phases, report=report, bounds_rows=rows)


def bounds_rows(config: RunConfig, traj: Trajectory | None = None) -> tuple[tuple[str, float], ...]:
    """Evaluate both analytic certificates as (quantity, value) rows.

    Infeasible or inapplicable outcomes become 0/1 flag rows, never
    exceptions: the certificates are sufficient conditions and the bundled
    scenarios intentionally operate below them.  State bounds default to the
    extrema of the supplied pilot trajectory.
    """
    if traj is None:
        traj = integrate(
            config.params,
            config.topology,
            config.protocol,
            config.initial_states,
            config.duration,
            config.dt,
            entrainment=config.entrainment,
        )
    extrema = state_extrema(traj)
    z1 = config.bounds.z1_max if config.bounds.z1_max is not None else extrema.pos_max
    z2 = config.bounds.z2_max if config.bounds.z2_max is not None else extrema.vel_max
    avg = bounds_mod.AveragedParams.from_nodes(config.params)
    rows: list[tuple[str, float]] = [
        ("p_M", extrema.pos_max),
        ("v_M", extrema.vel_max),
        ("m_bar", bounds_mod.m_bar(config.params, extrema.pos_max, extrema.vel_max)),
    ]

    window = bounds_mod.contraction_window(avg, z1, z2, config.topology.n)
    complete_unweighted = bool(
        np.all((config.topology.weights == 1.0) | (np.eye(config.topology.n) == 1.0))
    )
    rows += [
        ("c_lo", window.c_lo),
        ("c_hi", window.c_hi),
        ("contraction_feasible", float(window.feasible)),
        ("contraction_assumes_complete_unweighted", 1.0),
        ("topology_is_complete_unweighted", float(complete_unweighted)),
    ]

    connected = config.topology.is_connected()
    if connected:
        ln = normalized_neighbor_laplacian(config.topology)
        lam2 = spectrum(ln, symmetric_similarity_hint=config.topology.neighbor_counts).lambda2
        rows.append(("lambda2", lam2))

    gammas = np.array([p.gamma for p in config.params])
    quad_ok = np.ptp(gammas) <= 1e-9 and connected
    rows.append(("quad_applicable", float(quad_ok)))
    if quad_ok:
        shape = (config.bounds.gamma1, config.bounds.gamma2)
        cert = bounds_mod.quad_certificate(
            config.topology,
            config.params,
            p=(config.bounds.p11, config.bounds.p22),
            w11=config.bounds.w11,
            coupling_shape=shape,
            c=config.protocol.c if isinstance(config.protocol, FullState) else None,
            pos_max=extrema.pos_max,
            vel_max=extrema.vel_max,
            w22=config.bounds.w22,
        )
        rows.append(("c_bar", cert.c_bar))
        rows.append(("epsilon_applicable", float(cert.epsilon is not None)))
        if cert.epsilon is not None:
            rows.append(("epsilon", cert.epsilon))
    return tuple(rows)


def _derive_seed(master: int, i: int, j: int) -> int:
    digest = hashlib.sha256(f"{master}:{i}:{j}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _with_field(config: RunConfig, field: str, value: float) -> RunConfig:
    """Return a copy of the config with one dotted scalar field replaced."""
    section, _, key = field.partition(".")
    if section == "protocol":
        proto = config.protocol
        if not hasattr(proto, key):
            raise ConfigError(f"sweep field {field!r} does not exist on {type(proto).__name__}")
        return dataclasses.replace(config, protocol=dataclasses.replace(proto, **{key: value}))
    if section == "entrainment":
        if key not in ("amplitude", "frequency"):
            raise ConfigError(f"sweep field {field!r} is not a scalar entrainment field")
        ent = dataclasses.replace(config.entrainment, enabled=True, **{key: value})
        return dataclasses.replace(config, entrainment=ent)
    if section == "simulation":
        if key not in ("duration", "dt"):
            raise ConfigError(f"sweep field {field!r} is not a scalar simulation field")
        return dataclasses.replace(config, **{key: value})
    raise ConfigError(f"sweep field {field!r} not supported")


def run_sweep(config: RunConfig) -> list[SweepCell]:
    """Execute the sweep grid cell by cell (no I/O).

    Cells are independent; each gets its own seed derived from the master
    seed and grid position, and a diverging cell is recorded without
    stopping the rest of the grid.
    """
    if config.sweep is None:
        raise ConfigError("configuration has no [sweep] section")
    spec = config.sweep
    grid2 = spec.values2 if spec.field2 else (None,)
    cells: list[SweepCell] = []
    for i, v1 in enumerate(spec.values):
        for j, v2 in enumerate(grid2):
            cell_cfg = _with_field(config, spec.field, v1)
            if spec.field2 and v2 is not None:
                cell_cfg = _with_field(cell_cfg, spec.field2, v2)
            cell_seed = _derive_seed(config.seed, i, j)
            cell_cfg = dataclasses.replace(cell_cfg, seed=cell_seed, sweep=None)
            try:
                traj = integrate(
                    cell_cfg.params,
                    cell_cfg.topology,
                    cell_cfg.protocol,
                    cell_cfg.initial_states,
                    cell_cfg.duration,
                    cell_cfg.dt,
                    entrainment=cell_cfg.entrainment,
                )
            except Exception:
                cells.append(SweepCell(v1, v2, report=None, diverged=True, seed=cell_seed))
                continue
            report = compute_sync_report(traj, entrainment=cell_cfg.entrainment)
            cells.append(SweepCell(v1, v2, report=report, diverged=False, seed=cell_seed))
    return cells


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".9g")


def _write_csv(path: Path, header: Sequence[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def write_outputs(result: RunResult, out_dir: str | Path | None = None) -> RunResult:
    """Write the full artifact bundle for one run and record the paths."""
    base = Path(out_dir if out_dir is not None else result.config.out_dir)
    traj = result.trajectory
    phases = result.phases
    report = result.report
    n = traj.n_nodes
    written = [
        _write_csv(
            base / "trajectory.csv",
            ("t", "node", "pos", "vel"),
            (
                (traj.times[k], i + 1, traj.states[k, i, 0], traj.states[k, i, 1])
                for k in range(traj.num_samples)
                for i in range(n)
            ),
        ),
        _write_csv(
            base / "phases.csv",
            ("t", "node", "theta"),
            (
                (phases.times[k], i + 1, phases.phases[k, i])
                for k in range(phases.num_samples)
                for i in range(n)
            ),
        ),
        _write_csv(
            base / "rho_g_series.csv",
            ("t", "rho_g"),
            zip(traj.times, report.rho_g_series),
        ),
        _write_csv(
            base / "eta_series.csv",
            ("t", "eta"),
            zip(traj.times, report.eta_series),
        ),
        _write_csv(base / "sync_report.csv", ("metric", "node_or_pair", "value"), _report_rows(report)),
        _write_csv(base / "bounds.csv", ("quantity", "value"), result.bounds_rows),
    ]
    return dataclasses.replace(result, written=tuple(written))


def _report_rows(report: SyncReport):
    rows = []
    for i, value in enumerate(report.rho_k):
        rows.append(("rho_k", str(i + 1), value))
    rows.append(("rho_g_mean", "", report.rho_g_mean))
    rows.append(("rho_g_std", "", report.rho_g_std))
    n = report.rho_k.shape[0]
    for k in range(n - 1):
        for kp in range(k + 1, n):
            rows.append(("rho_d", f"{k + 1}-{kp + 1}", report.dyadic[k, kp]))
    if report.rho_e_k is not None:
        for i, value in enumerate(report.rho_e_k):
            rows.append(("rho_E_k", str(i + 1), value))
        rows.append(("rho_E", "", report.rho_e))
    rows.append(("indeterminate_samples", "", report.indeterminate_samples))
    return rows


def write_bounds_csv(rows, out_dir: str | Path) -> Path:
    """Write (quantity, value) rows as bounds.csv under out_dir."""
    return _write_csv(Path(out_dir) / "bounds.csv", ("quantity", "value"), rows)


def run(config: RunConfig, out_dir: str | Path | None = None) -> RunResult:
    """Simulate one configuration and write its artifact bundle."""
    return write_outputs(simulate(config), out_dir)


def sweep(config: RunConfig, out_dir: str | Path | None = None) -> list[SweepCell]:
    """Run the sweep grid and write the long-form sweep.csv."""
    cells = run_sweep(config)
    base = Path(out_dir if out_dir is not None else config.out_dir)
    rows = []
    for cell in cells:
        rows.append(
            (
                cell.value1,
                cell.value2,
                None if cell.report is None else cell.report.rho_g_mean,
                None if cell.report is None else cell.report.rho_g_std,
                None if cell.report is None or cell.report.rho_e is None else cell.report.rho_e,
            )
        )
    _write_csv(base / "sweep.csv", ("param1", "param2", "rho_g_mean", "rho_g_std", "rho_E"), rows)
    return cells
