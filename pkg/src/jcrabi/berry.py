"""Geometric phases of rotated JC/Rabi eigenstates along phi: 0 -> 2 pi.

The loop is generated by U(phi) = exp(-i n_hat phi): the family
H'(phi) = U(phi) H U(phi)^dag is diagonalized on a uniform phi grid, one
eigenvector is tracked by maximal overlap, and the closed-loop phase is
estimated three independent ways:

* wilson_loop       -- gauge-invariant discrete loop product
                       gamma = -Im sum_k log <psi_k|psi_k+1>
* connection_curve  -- gauge-fixed connection A = i <psi|d/dphi psi>
                       integrated by the trapezoid rule (the observable
                       usually plotted as an accumulating gamma(phi) curve)
* generator_phase   -- the analytic oracle 2 pi <n_hat>, exact for rotated
                       families because |psi(phi)> = U(phi)|psi(0)> is a
                       single-valued eigenpath with constant connection

Increasing phi with U(phi) = exp(-i n_hat phi) defines the positive loop
orientation; under it the resonant JC first excited state acquires +pi.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fock import TruncationConfig, embed, ladder_ops
from .linalg import EIG_RTOL, ConvergenceError, expectation, hermitian_eig
from .models import ModelKind, ModelParams, build_hamiltonian, phase_factors

TWO_PI = 2.0 * np.pi
CONTINUITY_THRESHOLD = 0.99


class TrackingError(RuntimeError):
    """Eigenpath continuation became ambiguous at some phi node."""

    def __init__(self, node: int, overlap: float, threshold: float):
        self.node = node
        self.overlap = float(overlap)
        super().__init__(
            f"eigenpath tracking lost at phi node {node}: best overlap "
            f"{overlap:.6f} is below the continuity threshold {threshold}; "
            "a true degeneracy may sit on the loop, or the grid is too "
            "coarse - try a larger K"
        )


class DegenerateLevelError(ValueError):
    """Requested level sits inside a degenerate cluster."""


def wrap_phase(gamma: float) -> float:
    """Reduce a phase to the principal interval (-pi, pi]."""
    w = float(gamma) % TWO_PI
    return w - TWO_PI if w > np.pi else w


def phase_distance(a: float, b: float) -> float:
    """Distance between two phases modulo 2 pi."""
    return abs(wrap_phase(a - b))


@dataclass(frozen=True)
class GaugeConvention:
    """Phase convention for an eigenvector family.

    kind 'parallel_transport' makes every step overlap real >= 0; kind
    'anchor_component' keeps one vector component real >= 0 at every node
    (the component defaults to the largest-magnitude one at phi = 0); kind
    'raw' leaves the eigensolver phases untouched.
    """

    kind: str
    anchor_index: int | None = None

    def __post_init__(self):
        if self.kind not in ("parallel_transport", "anchor_component", "raw"):
            raise ValueError(f"unknown gauge kind {self.kind!r}")

    @property
    def tag(self) -> str:
        if self.kind == "anchor_component" and self.anchor_index is not None:
            return f"anchor_component({self.anchor_index})"
        return self.kind


PARALLEL_TRANSPORT = GaugeConvention("parallel_transport")
RAW = GaugeConvention("raw")


def anchor_component(index: int | None = None) -> GaugeConvention:
    return GaugeConvention("anchor_component", index)


@dataclass(frozen=True)
class TrackedFamily:
    """One eigenvector per node of the uniform phi grid (0 ... 2 pi).

    Identity across nodes is maintained by maximal-overlap continuation, so
    the tracked level may cross others in energy without being lost.
    """

    phi_grid: np.ndarray
    vectors: np.ndarray   # shape (K + 1, dim), row k belongs to phi_grid[k]
    energies: np.ndarray
    level: int
    min_step_overlap: float
    kind: ModelKind
    params: ModelParams
    cfg: TruncationConfig
    gauge: GaugeConvention = RAW

    @property
    def steps(self) -> int:
        return len(self.phi_grid) - 1


def _coerce_kind(kind) -> ModelKind:
    if isinstance(kind, ModelKind):
        return kind
    return ModelKind.of(str(kind), "lab")


def eig_family(
    kind,
    p: ModelParams,
    level: int,
    K: int,
    cfg: TruncationConfig,
    threshold: float = CONTINUITY_THRESHOLD,
) -> TrackedFamily:
    """Diagonalize H'(phi_k) at K + 1 uniform nodes and track one level.

    ``level`` is the eigenindex at phi = 0 (0 = ground state).  At each
    subsequent node the eigenvector maximizing |<psi_prev|candidate>| is
    selected; a best overlap below ``threshold`` raises TrackingError.
    """
    kind = _coerce_kind(kind)
    if K < 16:
        raise ValueError(f"K must be >= 16, got {K}")
    h0 = build_hamiltonian(kind, p, cfg)
    dim = h0.shape[0]
    if not 0 <= level < dim:
        raise ValueError(f"level must be in [0, {dim}), got {level}")
    maxabs = float(np.max(np.abs(h0)))
    residual_bound = EIG_RTOL * max(maxabs, 1.0)

    phi_grid = TWO_PI * np.arange(K + 1) / K
    vectors = np.empty((K + 1, dim), dtype=complex)
    energies = np.empty(K + 1)
    min_overlap = 1.0

    prev = None
    for k, phi in enumerate(phi_grid):
        d = phase_factors(phi, cfg)
        hk = d[:, None] * h0 * d.conj()[None, :]
        hk = 0.5 * (hk + hk.conj().T)
        vals, vecs = np.linalg.eigh(hk)
        if k == 0:
            idx = level
        else:
            amps = vecs.conj().T @ prev
            idx = int(np.argmax(np.abs(amps)))
            overlap = float(np.abs(amps[idx]))
            if overlap < threshold:
                raise TrackingError(k, overlap, threshold)
            min_overlap = min(min_overlap, overlap)
        v = vecs[:, idx]
        resid = float(np.max(np.abs(hk @ v - vals[idx] * v)))
        if resid > residual_bound:
            raise ConvergenceError(
                f"eigen-residual {resid:.3e} at phi node {k} exceeds "
                f"{residual_bound:.3e}"
            )
        vectors[k] = v
        energies[k] = vals[idx]
        prev = v

    return TrackedFamily(
        phi_grid, vectors, energies, level, min_overlap, kind, p, cfg, RAW
    )


def gauge_fix(f: TrackedFamily, gauge: GaugeConvention) -> TrackedFamily:
    """Rephase the family per the convention; physical content unchanged."""
    if gauge.kind == "raw":
        return replace(f, gauge=RAW)

    vectors = f.vectors.copy()
    if gauge.kind == "parallel_transport":
        for k in range(1, len(vectors)):
            overlap = np.vdot(vectors[k - 1], vectors[k])
            if overlap != 0.0:
                vectors[k] *= np.conj(overlap) / abs(overlap)
        fixed_gauge = gauge
    else:
        idx = gauge.anchor_index
        if idx is None:
            idx = int(np.argmax(np.abs(vectors[0])))
        for k in range(len(vectors)):
            amp = vectors[k][idx]
            if abs(amp) < 1e-8:
                raise ValueError(
                    f"anchor component {idx} has magnitude {abs(amp):.3e} "
                    f"< 1e-8 at phi node {k}; pick another component"
                )
            vectors[k] *= np.conj(amp) / abs(amp)
        fixed_gauge = anchor_component(idx)
    return replace(f, vectors=vectors, gauge=fixed_gauge)


@dataclass(frozen=True)
class LoopResult:
    """Closed-loop geometric phase plus its accumulation curve.

    gamma is reported in (-pi, pi]; gamma_unwrapped is the final value of the
    partial-phase curve (they agree modulo 2 pi).  residual is the
    discretization estimate from comparing the full grid against its
    half-density subsample (nan when the grid cannot be halved).
    """

    gamma: float
    gamma_unwrapped: float
    curve: np.ndarray  # shape (K + 1, 2): columns (phi, partial phase)
    gauge: str
    residual: float
    closure_phase: float = 0.0


def _subsample(f: TrackedFamily) -> TrackedFamily | None:
    if f.steps % 2 != 0 or f.steps < 4:
        return None
    sl = slice(None, None, 2)
    return replace(
        f,
        phi_grid=f.phi_grid[sl],
        vectors=f.vectors[sl],
        energies=f.energies[sl],
    )


def _wilson_gamma_and_curve(f: TrackedFamily):
    K = f.steps
    partial = np.zeros(K + 1)
    acc = 0.0
    for k in range(K):
        nxt = f.vectors[0] if k == K - 1 else f.vectors[k + 1]
        overlap = complex(np.vdot(f.vectors[k], nxt))
        if abs(overlap) < 0.5:
            raise TrackingError(k, abs(overlap), 0.5)
        acc += -np.imag(np.log(overlap))
        partial[k + 1] = acc
    return acc, np.column_stack([f.phi_grid, partial])


def wilson_loop(f: TrackedFamily) -> LoopResult:
    """Discrete closed-loop phase gamma = -Im sum_k log <psi_k|psi_k+1>.

    The last step closes onto psi_0, so the result is invariant under any
    per-node rephasing of the input.  A step overlap below 0.5 means the
    loop is under-resolved and raises TrackingError.
    """
    if not np.isclose(f.phi_grid[0], 0.0) or not np.isclose(f.phi_grid[-1], TWO_PI):
        raise ValueError("wilson_loop needs a closed family spanning phi = 0 ... 2 pi")
    gamma, curve = _wilson_gamma_and_curve(f)
    sub = _subsample(f)
    residual = float("nan")
    if sub is not None:
        gamma_half, _ = _wilson_gamma_and_curve(sub)
        residual = phase_distance(gamma, gamma_half)
    return LoopResult(wrap_phase(gamma), float(gamma), curve, f.gauge.tag, residual)


def _connection_gamma_and_curve(f: TrackedFamily):
    K = f.steps
    v = f.vectors
    dphi = f.phi_grid[1] - f.phi_grid[0]
    # A = i <psi|d/dphi psi> = -Im <psi_k|central difference>
    a = np.empty(K + 1)
    a[0] = -np.imag(np.vdot(v[0], v[1] - v[0])) / dphi
    a[-1] = -np.imag(np.vdot(v[-1], v[-1] - v[-2])) / dphi
    for k in range(1, K):
        a[k] = -np.imag(np.vdot(v[k], v[k + 1] - v[k - 1])) / (2.0 * dphi)
    partial = np.concatenate([[0.0], np.cumsum(0.5 * dphi * (a[1:] + a[:-1]))])
    # The loop closes through <psi_K|psi_0>: for a single-valued gauge this
    # closure phase is ~0; in the parallel-transport gauge it carries the
    # whole holonomy.  Fold it into the final node so the curve ends at the
    # closed-loop value.
    closure = -np.imag(np.log(complex(np.vdot(v[-1], v[0]))))
    partial[-1] += closure
    return partial[-1], np.column_stack([f.phi_grid, partial]), closure


def connection_curve(f: TrackedFamily, gauge: GaugeConvention) -> LoopResult:
    """Integrate the gauge-fixed connection along the loop (trapezoid rule).

    The integrand Im <psi_k|(psi_k+1 - psi_k-1)>/(2 dphi) (one-sided at the
    ends) is gauge dependent, so a raw family is rejected.  Under the
    parallel-transport gauge the closed-loop value reproduces wilson_loop's
    gamma; under an anchor gauge the curve is the usual accumulating
    gamma(phi) observable.
    """
    if gauge.kind == "raw":
        raise ValueError(
            "connection_curve needs a gauge-fixed family: the integrand is "
            "gauge dependent and meaningless for the raw eigensolver phases"
        )
    fixed = gauge_fix(f, gauge)
    gamma, curve, closure = _connection_gamma_and_curve(fixed)
    sub = _subsample(fixed)
    residual = float("nan")
    if sub is not None:
        refixed = gauge_fix(sub, gauge)
        gamma_half, _, _ = _connection_gamma_and_curve(refixed)
        residual = phase_distance(gamma, gamma_half)
    return LoopResult(
        wrap_phase(gamma), float(gamma), curve, fixed.gauge.tag, residual, float(closure)
    )


def generator_phase(kind, p: ModelParams, level: int, cfg: TruncationConfig) -> float:
    """Analytic loop phase 2 pi <psi_level(0)|n_hat|psi_level(0)>.

    Exact for families rotated by U(phi) = exp(-i n_hat phi): the eigenpath
    U(phi)|psi(0)> is single valued with connection <n_hat>.  Meaningless
    inside a degenerate cluster, so a level gap below 1e-10 is rejected.
    """
    kind = _coerce_kind(kind)
    es = hermitian_eig(build_hamiltonian(kind, p, cfg))
    if not 0 <= level < es.dim:
        raise ValueError(f"level must be in [0, {es.dim}), got {level}")
    gaps = []
    if level > 0:
        gaps.append(es.values[level] - es.values[level - 1])
    if level < es.dim - 1:
        gaps.append(es.values[level + 1] - es.values[level])
    gap = min(gaps)
    if gap < 1e-10:
        raise DegenerateLevelError(
            f"level {level} is degenerate (gap {gap:.3e} < 1e-10): the "
            "geometric phase of a single level is undefined there"
        )
    _, _, n_hat = ladder_ops(cfg)
    n_joint = embed(n_hat, None, cfg)
    return TWO_PI * expectation(n_joint, es.vectors[:, level])
