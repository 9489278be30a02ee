"""Simulation and analysis toolkit for heterogeneous networks of HKB oscillators.

Submodules:

* graph    -- weighted simple undirected graphs, Laplacians, spectra
* dynamics -- node fields, coupling protocols, entrainment, RK4 integration
* phase    -- analytic-signal instantaneous phase extraction
* metrics  -- synchronization indices and the tracking-error norm
* bounds   -- contraction and Lyapunov coupling-strength certificates
* runner   -- presets, config files, sweeps, CSV artifact emission
"""

from .bounds import (
    AveragedParams,
    BoundInapplicableError,
    ContractionWindow,
    InvalidBoundError,
    QuadCertificate,
    UndefinedBoundError,
    contraction_window,
    m_bar,
    quad_cbar,
    quad_cbar_direct,
    quad_cbar_minimized,
    quad_certificate,
    quad_epsilon,
    quad_epsilon_direct,
    virtual_jacobian,
)
from .dynamics import (
    CouplingProtocol,
    DivergenceError,
    Entrainment,
    FullState,
    HkbCoupling,
    NoCoupling,
    OscillatorParams,
    PartialState,
    StateExtrema,
    Trajectory,
    coupling_term,
    hkb_field,
    integrate,
    network_rhs,
    state_extrema,
)
from .graph import (
    DegenerateNodeError,
    EigenSolverError,
    GenerationError,
    SpectrumResult,
    Topology,
    TopologyError,
    complete_graph,
    kron_lambda2,
    laplacian,
    normalized_neighbor_laplacian,
    random_weighted_graph,
    spectrum,
    symmetric_eigenvalues,
)
from .metrics import (
    ClusterPhase,
    EntrainmentUndefinedError,
    InvalidPairError,
    RelativePhase,
    SyncReport,
    agent_relative_phase,
    agent_sync_degree,
    cluster_phase,
    compute_sync_report,
    dyadic_matrix,
    dyadic_sync,
    entrainment_index,
    group_sync_series,
    group_sync_summary,
    tracking_error_norm,
)
from .phase import (
    DegenerateSignalError,
    PhaseSeries,
    SignalTooShortError,
    analytic_signal,
    fft,
    ifft,
    instantaneous_phase,
    phases_from_trajectory,
    wrap_phase,
)
from .runner import (
    BoundsOptions,
    ConfigError,
    PRESET_NAMES,
    RunConfig,
    RunResult,
    SweepCell,
    SweepSpec,
    bounds_rows,
    load_config,
    preset_config,
    run,
    run_sweep,
    simulate,
    sweep,
    validate_config,
    write_bounds_csv,
    write_outputs,
)

__version__ = "0.1.0"
