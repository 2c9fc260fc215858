"""jcrabi: Jaynes-Cummings vs quantum Rabi toolkit.

Dense numerics for the two standard cavity-QED models on a truncated boson
space: spectrum sweeps and their counter-rotating deviations, mean-field
Born-Oppenheimer energy surfaces, and geometric phases of rotated eigenstate
families computed by three independent estimators.
"""

__version__ = "0.1.0"

from .fock import TruncationConfig, embed, ladder_ops, quadrature_ops, qubit_ops
from .linalg import (
    ConvergenceError,
    EigenSystem,
    HermiticityError,
    commutator_deviation,
    expectation,
    hermitian_eig,
    kron,
)
from .models import (
    DressedDoublet,
    ModelKind,
    ModelParams,
    build_hamiltonian,
    build_jc,
    build_rabi,
    empty_state_energy,
    jc_doublet_analytic,
    rotate_hamiltonian,
    symmetry_ops,
    u_phi,
)
from .spectra import (
    ConvergenceTable,
    CrossingResult,
    SpectrumTable,
    bloch_siegert,
    convergence_study,
    ground_crossing,
    spectrum_sweep,
)
from .surfaces import (
    DegeneracyReport,
    SurfaceGrid,
    berry_boa_jc,
    berry_exact_jc,
    boa_radius,
    boa_surface,
    classify_degeneracy,
)
from .berry import (
    GaugeConvention,
    LoopResult,
    PARALLEL_TRANSPORT,
    RAW,
    TrackedFamily,
    TrackingError,
    DegenerateLevelError,
    anchor_component,
    connection_curve,
    eig_family,
    gauge_fix,
    generator_phase,
    wilson_loop,
    wrap_phase,
)
