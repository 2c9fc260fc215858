"""Hamiltonian builders for the Jaynes-Cummings and quantum Rabi models.

Model conventions (omega = 1 scaling throughout):

* Rabi, lab frame:        H_R  = w a^dag a + (W/2) sz + g sqrt(2) (a + a^dag) sx
* Rabi, quadrature frame: H_R  = w (p^2 + x^2)/2 + (W/2) sz + 2 g x sx
* JC, lab frame:          H_JC = w a^dag a + (W/2) sz + g sqrt(2) (a^dag s- + s+ a)
* JC, quadrature frame:   H_JC = (D/2) sz + g sqrt(2) (a s+ + a^dag s-)
                               = (D/2) sz + g (x sx - p sy)

with detuning D = W - w.  The last identity uses this package's momentum sign
(p = i(a^dag - a)/sqrt(2), canonical [x, p] = +i); with the opposite sign of p
the same coupling reads x sx + p sy.

The lab and quadrature Rabi frames differ by the vacuum offset w/2 plus
truncation-edge effects only; JC lab and quadrature frames commute (they
differ by w * N_hat) and share exact eigenvectors.

Phase-space rotations use U(phi) = exp(-i n_hat phi); rotated Hamiltonians
are always computed by explicit conjugation U H U^dag, never by transcribing
a closed-form rotated expression.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .fock import SQRT2, TruncationConfig, embed, ladder_ops, quadrature_ops, qubit_ops
from .linalg import hermitian_eig

LAB = "lab"
QUADRATURE = "quadrature"


class ModelKind(enum.Enum):
    """Model and frame tag for the four Hamiltonian builders."""

    JC_LAB = ("jc", LAB)
    JC_QUADRATURE = ("jc", QUADRATURE)
    RABI_LAB = ("rabi", LAB)
    RABI_QUADRATURE = ("rabi", QUADRATURE)

    @property
    def model(self) -> str:
        return self.value[0]

    @property
    def frame(self) -> str:
        return self.value[1]

    @staticmethod
    def of(model: str, frame: str = LAB) -> "ModelKind":
        for kind in ModelKind:
            if kind.value == (model, frame):
                return kind
        raise ValueError(f"unknown model/frame combination {model!r}/{frame!r}")


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters; omega = 1 unless explicitly overridden.

    delta = Omega - omega is derived, never stored independently.
    """

    Omega: float = 1.0
    g: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.Omega < 0:
            raise ValueError(f"Omega must be >= 0, got {self.Omega}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")

    @property
    def delta(self) -> float:
        return self.Omega - self.omega

    def with_g(self, g: float) -> "ModelParams":
        return ModelParams(Omega=self.Omega, g=g, omega=self.omega)


def _check_frame(frame: str):
    if frame not in (LAB, QUADRATURE):
        raise ValueError(f"frame must be '{LAB}' or '{QUADRATURE}', got {frame!r}")


def build_rabi(p: ModelParams, cfg: TruncationConfig, frame: str = LAB) -> np.ndarray:
    """Quantum Rabi Hamiltonian on the joint space."""
    _check_frame(frame)
    a, a_dag, n_hat = ladder_ops(cfg)
    sx, _, sz, _, _ = qubit_ops()
    coupling = p.g * SQRT2 * embed(a + a_dag, sx, cfg)
    if frame == LAB:
        h = p.omega * embed(n_hat, None, cfg) + 0.5 * p.Omega * embed(None, sz, cfg)
        return h + coupling
    x_hat, p_hat = quadrature_ops(cfg)
    kinetic = 0.5 * p.omega * embed(p_hat @ p_hat + x_hat @ x_hat, None, cfg)
    # 2 g x sx == g sqrt(2) (a + a^dag) sx, entrywise
    return kinetic + 0.5 * p.Omega * embed(None, sz, cfg) + coupling


def build_jc(p: ModelParams, cfg: TruncationConfig, frame: str = LAB) -> np.ndarray:
    """Jaynes-Cummings Hamiltonian (rotating-wave coupling) on the joint space."""
    _check_frame(frame)
    a, a_dag, n_hat = ladder_ops(cfg)
    _, _, sz, sp, sm = qubit_ops()
    coupling = p.g * SQRT2 * (embed(a, sp, cfg) + embed(a_dag, sm, cfg))
    if frame == LAB:
        h = p.omega * embed(n_hat, None, cfg) + 0.5 * p.Omega * embed(None, sz, cfg)
        return h + coupling
    # interaction picture: strip w * N_hat, leaving (D/2) sz + the coupling
    return 0.5 * p.delta * embed(None, sz, cfg) + coupling


_BUILDERS = {"jc": build_jc, "rabi": build_rabi}


def build_hamiltonian(kind: ModelKind, p: ModelParams, cfg: TruncationConfig) -> np.ndarray:
    return _BUILDERS[kind.model](p, cfg, kind.frame)


def phase_factors(phi: float, cfg: TruncationConfig) -> np.ndarray:
    """Diagonal of U(phi) = exp(-i n_hat phi) on the joint space."""
    field_phase = np.exp(-1j * phi * np.arange(cfg.dim_field))
    return np.concatenate([field_phase, field_phase])


def u_phi(phi: float, cfg: TruncationConfig) -> np.ndarray:
    """Phase-space rotation U(phi) = exp(-i n_hat phi), qubit factor identity."""
    return np.diag(phase_factors(phi, cfg))


def rotate_hamiltonian(h, phi: float, cfg: TruncationConfig) -> np.ndarray:
    """U(phi) H U(phi)^dag, symmetrized to be exactly Hermitian.

    U(phi) is diagonal, so the conjugation is done entrywise in O(dim^2).
    The spectrum is invariant under the rotation.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (cfg.dim_joint, cfg.dim_joint):
        raise ValueError(
            f"H must be {cfg.dim_joint}x{cfg.dim_joint} for n_max={cfg.n_max}, "
            f"got {h.shape}"
        )
    d = phase_factors(phi, cfg)
    rotated = d[:, None] * h * d.conj()[None, :]
    return 0.5 * (rotated + rotated.conj().T)


def empty_state_energy(p: ModelParams) -> float:
    """Energy -Omega/2 of the exact uncoupled JC eigenstate |1>|0>."""
    return -0.5 * p.Omega


@dataclass(frozen=True)
class DressedDoublet:
    """Analytic JC doublet for excitation number n >= 1.

    The two eigenstates live in span{|2>|n-1>, |1>|n>} with mixing angle
    theta in [0, pi/2], tan(2 theta) = 2 g sqrt(2 n) / delta (theta = pi/4 on
    resonance):

        |+> = cos(theta) |2>|n-1> + sin(theta) |1>|n>
        |-> = -sin(theta) |2>|n-1> + cos(theta) |1>|n>

    with energies w(n - 1/2) +/- sqrt(delta^2/4 + 2 g^2 n).
    """

    n: int
    theta: float
    energies: tuple  # (E_plus, E_minus)
    amplitudes: tuple = field(repr=False, default=None)  # ((c, s), (-s, c))

    def state_vectors(self, cfg: TruncationConfig):
        """Embed the doublet pair as unit vectors on the joint space."""
        if self.n > cfg.n_max:
            raise ValueError(f"doublet n={self.n} needs n_max >= {self.n}")
        dim_f = cfg.dim_field
        idx_upper = self.n - 1          # |2>|n-1>: excited block
        idx_lower = dim_f + self.n      # |1>|n>: ground block
        vecs = []
        for amp_upper, amp_lower in self.amplitudes:
            v = np.zeros(cfg.dim_joint, dtype=complex)
            v[idx_upper] = amp_upper
            v[idx_lower] = amp_lower
            vecs.append(v)
        return tuple(vecs)


def jc_doublet_analytic(n: int, p: ModelParams) -> DressedDoublet:
    """Closed-form JC doublet; n = 0 is rejected (the uncoupled state |1>|0>
    with energy -Omega/2 is exposed via empty_state_energy)."""
    if int(n) != n or n < 1:
        raise ValueError(
            f"doublet index must be an integer >= 1, got {n!r}; the n=0 "
            "'empty' state is exact with energy -Omega/2 (empty_state_energy)"
        )
    n = int(n)
    rabi_freq = 2.0 * p.g * np.sqrt(2.0 * n)
    theta = 0.5 * np.arctan2(rabi_freq, p.delta)  # branch theta in [0, pi/2]
    half_split = np.hypot(0.5 * p.delta, p.g * np.sqrt(2.0 * n))
    mean = p.omega * (n - 0.5)
    c, s = np.cos(theta), np.sin(theta)
    return DressedDoublet(
        n=n,
        theta=float(theta),
        energies=(float(mean + half_split), float(mean - half_split)),
        amplitudes=((c, s), (-s, c)),
    )


def symmetry_ops(cfg: TruncationConfig):
    """Excitation number N = n + sz/2 and parity Pi = sz (x) (-1)^n.

    [H_JC, N] = 0 (U(1) symmetry) and [H_R, Pi] = 0 (Z2 symmetry), both exact
    on the truncated space; Pi is diagonal with entries +/-1 and Pi^2 = I.
    """
    _, _, n_hat = ladder_ops(cfg)
    _, _, sz, _, _ = qubit_ops()
    n_total = embed(n_hat, None, cfg) + 0.5 * embed(None, sz, cfg)
    field_parity = np.diag((-1.0 + 0j) ** np.arange(cfg.dim_field))
    parity = embed(field_parity, sz, cfg)
    return n_total, parity


def frame_offset_spectrum_check(p: ModelParams, cfg: TruncationConfig, k: int) -> float:
    """Max deviation of the k lowest Rabi eigenvalues between frames after
    removing the w/2 vacuum offset from the quadrature frame."""
    lab = hermitian_eig(build_rabi(p, cfg, LAB)).values[:k]
    quad = hermitian_eig(build_rabi(p, cfg, QUADRATURE)).values[:k]
    return float(np.max(np.abs(quad - 0.5 * p.omega - lab)))
