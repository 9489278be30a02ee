"""Phase-based synchronization indices and the state-space tracking error.

All time averages are plain discrete means over the samples (no quadrature
correction), and the spread of the group index uses the population
normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Entrainment, Trajectory
from .phase import PhaseSeries, phases_from_trajectory, wrap_phase

# Mean phasors shorter than this leave the group angle undefined.
INDETERMINATE_ORDER_TOL = 1e-12


class InvalidPairError(ValueError):
    """Dyadic synchronization needs two distinct nodes."""


class EntrainmentUndefinedError(ValueError):
    """Entrainment index requested for a run without an entrainment signal."""


@dataclass(frozen=True)
class ClusterPhase:
    """Mean unit phasor over agents at one sample, with its angle.

    When the phasors cancel almost exactly the angle is meaningless; the
    sample is flagged indeterminate and the angle reported as 0.
    """

    order: complex
    angle: float
    indeterminate: bool


@dataclass(frozen=True, eq=False)
class RelativePhase:
    """Per-node phase relative to the group, and its time-averaged phasor.

    excluded_samples counts how many cluster-phase-indeterminate samples
    were left out of the phasor average.
    """

    series: np.ndarray
    mean_phasor: np.ndarray
    mean_phase: np.ndarray
    excluded_samples: int


@dataclass(frozen=True, eq=False)
class SyncReport:
    """Every synchronization quantity computed from one trajectory."""

    rho_k: np.ndarray
    rho_g_series: np.ndarray
    rho_g_mean: float
    rho_g_std: float
    dyadic: np.ndarray
    eta_series: np.ndarray
    rho_e_k: np.ndarray | None = None
    rho_e: float | None = None
    indeterminate_samples: int = 0


def cluster_phase(phases_at_t) -> ClusterPhase:
    """Kuramoto order parameter of one phase snapshot."""
    ph = np.asarray(phases_at_t, dtype=float)
    if ph.ndim != 1 or ph.size < 1:
        raise ValueError("need a one-dimensional snapshot of at least one phase")
    order = complex(np.exp(1j * ph).mean())
    if abs(order) < INDETERMINATE_ORDER_TOL:
        return ClusterPhase(order=order, angle=0.0, indeterminate=True)
    return ClusterPhase(order=order, angle=math.atan2(order.imag, order.real), indeterminate=False)


def _cluster_phase_series(phases: np.ndarray):
    order = np.exp(1j * phases).mean(axis=1)
    indeterminate = np.abs(order) < INDETERMINATE_ORDER_TOL
    angles = np.where(indeterminate, 0.0, np.angle(order))
    return order, angles, indeterminate


def agent_relative_phase(phases: PhaseSeries) -> RelativePhase:
    """Phase of each node relative to the group, averaged as a unit phasor.

    Samples whose cluster phase is indeterminate are excluded from the
    phasor average and counted in the result.
    """
    _, group_angle, indeterminate = _cluster_phase_series(phases.phases)
    rel = wrap_phase(phases.phases - group_angle[:, None])
    valid = ~indeterminate
    if not valid.any():
        raise ValueError("cluster phase indeterminate at every sample")
    mean_phasor = np.exp(1j * rel[valid]).mean(axis=0)
    return RelativePhase(
        series=rel,
        mean_phasor=mean_phasor,
        mean_phase=wrap_phase(np.angle(mean_phasor)),
        excluded_samples=int(indeterminate.sum()),
    )


def agent_sync_degree(mean_phasor) -> np.ndarray:
    """Per-node degree of synchronization with the group trend, in [0, 1]."""
    return np.abs(mean_phasor)


def group_sync_series(rel_phases, mean_phase) -> np.ndarray:
    """Instantaneous group synchronization index in [0, 1]."""
    deviation = np.asarray(rel_phases, dtype=float) - np.asarray(mean_phase, dtype=float)[None, :]
    return np.abs(np.exp(1j * deviation).mean(axis=1))


def group_sync_summary(series) -> tuple[float, float]:
    """Time mean of the group index and its population standard deviation."""
    s = np.asarray(series, dtype=float)
    if s.size == 0:
        raise ValueError("series must be non-empty")
    mean = float(s.mean())
    std = float(np.sqrt(((s - mean) ** 2).mean()))
    return mean, std


def dyadic_sync(phases: PhaseSeries, k: int, k_prime: int) -> float:
    """Pairwise phase-locking strength between two nodes, in [0, 1]."""
    if k == k_prime:
        raise InvalidPairError(f"dyadic synchronization needs two distinct nodes, got {k} twice")
    diff = phases.phases[:, k] - phases.phases[:, k_prime]
    return float(np.abs(np.exp(1j * diff).mean()))


def dyadic_matrix(phases: PhaseSeries) -> np.ndarray:
    """Symmetric matrix of all pairwise locking strengths (diagonal fixed at 1)."""
    n = phases.n_nodes
    out = np.eye(n)
    for k in range(n - 1):
        for kp in range(k + 1, n):
            out[k, kp] = out[kp, k] = dyadic_sync(phases, k, kp)
    return out


def entrainment_index(phases: PhaseSeries, entrainment: Entrainment) -> tuple[np.ndarray, float]:
    """Per-node and mean phase locking onto the external sinusoid.

    The reference phase is computed analytically as frequency * t - pi/2
    (exact for a pure sine), not Hilbert-extracted.
    """
    if not entrainment.enabled or entrainment.amplitude == 0.0:
        raise EntrainmentUndefinedError("no entrainment signal was active; index undefined")
    reference = wrap_phase(entrainment.frequency * phases.times - 0.5 * np.pi)
    per_node = np.abs(np.exp(1j * (phases.phases - reference[:, None])).mean(axis=0))
    return per_node, float(per_node.mean())


def tracking_error_norm(traj: Trajectory) -> np.ndarray:
    """Euclidean norm of the stacked deviations from the average trajectory."""
    if traj.n_nodes < 2:
        raise ValueError("tracking error needs at least two nodes")
    deviation = traj.states - traj.states.mean(axis=1, keepdims=True)
    return np.sqrt((deviation * deviation).sum(axis=(1, 2)))


def compute_sync_report(
    traj: Trajectory,
    entrainment: Entrainment | None = None,
    phases: PhaseSeries | None = None,
) -> SyncReport:
    """Run the whole metric suite on one trajectory.

    Entrainment indices are filled in only when an active signal is passed;
    precomputed phases may be supplied to avoid repeating the extraction.
    """
    ph = phases if phases is not None else phases_from_trajectory(traj)
    rel = agent_relative_phase(ph)
    series = group_sync_series(rel.series, rel.mean_phase)
    mean, std = group_sync_summary(series)
    rho_e_k = None
    rho_e = None
    if entrainment is not None and entrainment.enabled and entrainment.amplitude > 0.0:
        rho_e_k, rho_e = entrainment_index(ph, entrainment)
    return SyncReport(
        rho_k=agent_sync_degree(rel.mean_phasor),
        rho_g_series=series,
        rho_g_mean=mean,
        rho_g_std=std,
        dyadic=dyadic_matrix(ph),
        eta_series=tracking_error_norm(traj),
        rho_e_k=rho_e_k,
        rho_e=rho_e,
        indeterminate_samples=rel.excluded_samples,
    )
