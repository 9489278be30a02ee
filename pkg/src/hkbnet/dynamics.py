"""HKB node dynamics, interaction protocols, and fixed-step network integration.

Each node is a second-order nonlinear oscillator with state (pos, vel):

    d pos / dt = vel
    d vel / dt = -(alpha * pos^2 + beta * vel^2 - gamma) * vel - omega^2 * pos

Nodes interact through one of three diffusive protocols, optionally driven by
a shared external sinusoid added to every acceleration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .graph import Topology, laplacian

# Integration aborts once any state component leaves this box.
STATE_MAGNITUDE_LIMIT = 1e6


class DivergenceError(RuntimeError):
    """Integration left the trusted state region (NaN, Inf, or runaway growth)."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class OscillatorParams:
    """Per-node HKB parameters.

    alpha and beta shape the limit-cycle amplitude, a positive gamma makes
    the oscillation persistent, and omega is the natural angular frequency
    in rad/s.
    """

    alpha: float
    beta: float
    gamma: float
    omega: float

    def __post_init__(self):
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("alpha and beta must be nonnegative")
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class NoCoupling:
    """Isolated nodes: every interaction term is zero."""


@dataclass(frozen=True)
class FullState:
    """Diffusive coupling of strength c acting on position and velocity."""

    c: float

    def __post_init__(self):
        if self.c < 0.0:
            raise ValueError("coupling strength must be nonnegative")


@dataclass(frozen=True)
class PartialState:
    """Acceleration-only coupling from position (c1) and velocity (c2) mismatch."""

    c1: float
    c2: float

    def __post_init__(self):
        if self.c1 < 0.0 or self.c2 < 0.0:
            raise ValueError("coupling strengths must be nonnegative")


@dataclass(frozen=True)
class HkbCoupling:
    """Nonlinear dyadic interaction [a + b * dpos^2] * dvel scaled by c."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.c < 0.0:
            raise ValueError("coupling strength must be nonnegative")


CouplingProtocol = Union[NoCoupling, FullState, PartialState, HkbCoupling]


@dataclass(frozen=True)
class Entrainment:
    """External sinusoid amplitude * sin(frequency * t) added to every acceleration."""

    amplitude: float = 0.0
    frequency: float = 1.0
    enabled: bool = False

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be nonnegative")
        if self.frequency <= 0.0:
            raise ValueError("frequency must be positive")

    @classmethod
    def off(cls) -> "Entrainment":
        return cls()

    def signal(self, t: float) -> float:
        if not self.enabled:
            return 0.0
        return self.amplitude * math.sin(self.frequency * t)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled network states.

    states[j, i] holds (pos, vel) of node i at times[j]; times is the uniform
    grid k * dt for k = 0 .. num_steps.
    """

    dt: float
    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if states.ndim != 3 or states.shape[2] != 2 or states.shape[0] != times.shape[0]:
            raise ValueError("states must have shape (num_samples, n, 2) matching times")
        if times.shape[0] < 1:
            raise ValueError("trajectory must hold at least one sample")
        if times.shape[0] > 1 and np.abs(np.diff(times) - self.dt).max() > 1e-9 * max(1.0, self.dt):
            raise ValueError("times must be uniform with step dt")
        if not (np.all(np.isfinite(states)) and np.all(np.isfinite(times))):
            raise ValueError("trajectory entries must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def n_nodes(self) -> int:
        return self.states.shape[1]

    @property
    def num_samples(self) -> int:
        return self.states.shape[0]

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def positions(self) -> np.ndarray:
        return self.states[:, :, 0]

    def velocities(self) -> np.ndarray:
        return self.states[:, :, 1]


@dataclass(frozen=True, eq=False)
class StateExtrema:
    """Per-node suprema of |pos| and |vel| over the samples, plus network maxima."""

    pos_max_per_node: np.ndarray
    vel_max_per_node: np.ndarray
    pos_max: float
    vel_max: float


def hkb_field(state: Sequence[float], params: OscillatorParams) -> np.ndarray:
    """Uncoupled node field (vel, -(alpha pos^2 + beta vel^2 - gamma) vel - omega^2 pos)."""
    pos = float(state[0])
    vel = float(state[1])
    acc = -(params.alpha * pos * pos + params.beta * vel * vel - params.gamma) * vel
    acc -= params.omega * params.omega * pos
    return np.array([vel, acc])


def coupling_term(
    i: int,
    states: np.ndarray,
    topology: Topology,
    protocol: CouplingProtocol,
) -> np.ndarray:
    """Interaction increment of node i under the given protocol.

    Every protocol is diffusive: the increment vanishes whenever all
    neighbors share node i's state.  The average mismatch is taken over the
    neighbor count, not the weighted degree.
    """
    if isinstance(protocol, NoCoupling):
        return np.zeros(2)
    x = np.asarray(states, dtype=float)
    w = topology.weights[i]
    count = int(np.count_nonzero(w > 0.0))
    if count == 0:
        raise ValueError(f"node {i} has no neighbors; coupled dynamics undefined")
    xi = x[i]
    if isinstance(protocol, FullState):
        acc = np.zeros(2)
        for j in np.flatnonzero(w > 0.0):
            acc += w[j] * (xi - x[j])
        return -(protocol.c / count) * acc
    if isinstance(protocol, PartialState):
        total = 0.0
        for j in np.flatnonzero(w > 0.0):
            total += w[j] * (
                protocol.c1 * (xi[0] - x[j, 0]) + protocol.c2 * (xi[1] - x[j, 1])
            )
        return np.array([0.0, -total / count])
    if isinstance(protocol, HkbCoupling):
        total = 0.0
        for j in np.flatnonzero(w > 0.0):
            dpos = xi[0] - x[j, 0]
            dvel = xi[1] - x[j, 1]
            total += w[j] * (protocol.a + protocol.b * dpos * dpos) * dvel
        return np.array([0.0, (protocol.c / count) * total])
    raise TypeError(f"unknown coupling protocol: {protocol!r}")


def _vectorized_rhs(
    params: Sequence[OscillatorParams],
    topology: Topology,
    protocol: CouplingProtocol,
    entrainment: Entrainment,
) -> Callable[[float, np.ndarray], np.ndarray]:
    """Build the (n, 2) -> (n, 2) network field used by the integrator."""
    n = topology.n
    if len(params) != n:
        raise ValueError(f"got {len(params)} parameter sets for {n} nodes")
    alpha = np.array([p.alpha for p in params])
    beta = np.array([p.beta for p in params])
    gamma = np.array([p.gamma for p in params])
    omega_sq = np.array([p.omega for p in params]) ** 2
    counts = topology.neighbor_counts.astype(float)
    coupled = not isinstance(protocol, NoCoupling)
    if coupled and np.any(counts == 0.0):
        raise ValueError("coupled dynamics need every node to have a neighbor")
    lap = laplacian(topology)
    weights = topology.weights

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        pos = x[:, 0]
        vel = x[:, 1]
        dpos = vel.copy()
        acc = -(alpha * pos * pos + beta * vel * vel - gamma) * vel - omega_sq * pos
        if isinstance(protocol, FullState):
            mismatch = lap @ x
            dpos -= (protocol.c / counts) * mismatch[:, 0]
            acc -= (protocol.c / counts) * mismatch[:, 1]
        elif isinstance(protocol, PartialState):
            acc -= (protocol.c1 * (lap @ pos) + protocol.c2 * (lap @ vel)) / counts
        elif isinstance(protocol, HkbCoupling):
            dp = pos[:, None] - pos[None, :]
            dv = vel[:, None] - vel[None, :]
            total = (weights * (protocol.a + protocol.b * dp * dp) * dv).sum(axis=1)
            acc += (protocol.c / counts) * total
        if entrainment.enabled:
            acc += entrainment.signal(t)
        out = np.empty_like(x)
        out[:, 0] = dpos
        out[:, 1] = acc
        return out

    return rhs


def network_rhs(
    time: float,
    flat_state: Sequence[float],
    params: Sequence[OscillatorParams],
    topology: Topology,
    protocol: CouplingProtocol,
    entrainment: Entrainment | None = None,
) -> np.ndarray:
    """Full network field on the stacked state [pos_1, vel_1, ..., pos_n, vel_n]."""
    ent = entrainment if entrainment is not None else Entrainment.off()
    x = np.asarray(flat_state, dtype=float)
    if x.shape != (2 * topology.n,):
        raise ValueError(f"flat state must hold {2 * topology.n} reals")
    if not np.all(np.isfinite(x)):
        raise DivergenceError("non-finite state passed to network field")
    rhs = _vectorized_rhs(params, topology, protocol, ent)
    return rhs(time, x.reshape(topology.n, 2)).reshape(-1)


def integrate(
    params: Sequence[OscillatorParams],
    topology: Topology,
    protocol: CouplingProtocol,
    x0: Sequence[float],
    duration: float,
    dt: float,
    entrainment: Entrainment | None = None,
) -> Trajectory:
    """Classical fixed-step 4th-order Runge-Kutta integration of the network.

    Every step is stored, so the sampling interval of the returned
    trajectory equals dt.  Deterministic: identical inputs yield identical
    trajectories.  Raises DivergenceError (with the offending step index)
    when the state stops being finite or exceeds STATE_MAGNITUDE_LIMIT.
    """
    if duration <= 0.0:
        raise ValueError("duration must be positive")
    if not 0.0 < dt <= duration:
        raise ValueError("dt must satisfy 0 < dt <= duration")
    ent = entrainment if entrainment is not None else Entrainment.off()
    n = topology.n
    x = np.array(x0, dtype=float).reshape(n, 2)
    if not np.all(np.isfinite(x)):
        raise ValueError("initial state must be finite")
    steps = int(round(duration / dt))
    rhs = _vectorized_rhs(params, topology, protocol, ent)
    states = np.empty((steps + 1, n, 2))
    states[0] = x
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(1, steps + 1):
        t = (k - 1) * dt
        k1 = rhs(t, x)
        k2 = rhs(t + half, x + half * k1)
        k3 = rhs(t + half, x + half * k2)
        k4 = rhs(t + dt, x + dt * k3)
        x = x + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if not np.all(np.isfinite(x)) or np.abs(x).max() > STATE_MAGNITUDE_LIMIT:
            raise DivergenceError(f"state left trusted region at step {k}", step=k)
        states[k] = x
    return Trajectory(dt=dt, times=np.arange(steps + 1) * dt, states=states)


def state_extrema(traj: Trajectory) -> StateExtrema:
    """Suprema of |pos| and |vel| per node over the samples, then over nodes."""
    pos_max = np.abs(traj.states[:, :, 0]).max(axis=0)
    vel_max = np.abs(traj.states[:, :, 1]).max(axis=0)
    return StateExtrema(
        pos_max_per_node=pos_max,
        vel_max_per_node=vel_max,
        pos_max=float(pos_max.max()),
        vel_max=float(vel_max.max()),
    )
