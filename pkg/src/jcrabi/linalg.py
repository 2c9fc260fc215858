"""Dense complex Hermitian linear algebra with explicit quality gates.

Every operator in this toolkit is a small dense matrix (dim <= ~1200), so a
direct LAPACK eigendecomposition is the right tool.  The wrappers below add
the checks the physics modules rely on: a Hermiticity gate on input, an
eigen-residual bound on output, and commutator diagnostics used to verify
model symmetries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Hermiticity gate, relative to max|A| (the ComplexMatrix contract).
HERMITICITY_RTOL = 1e-12
# Default eigen-residual bound, relative to max|A|.
EIG_RTOL = 1e-10


class HermiticityError(ValueError):
    """Input deviates from A == A^dag beyond tolerance."""

    def __init__(self, deviation: float, bound: float):
        self.deviation = float(deviation)
        self.bound = float(bound)
        super().__init__(
            f"matrix is not Hermitian: max|A - A^dag| = {deviation:.6e} "
            f"exceeds the allowed {bound:.6e}"
        )


class ConvergenceError(RuntimeError):
    """Eigensolver did not reach its accuracy target."""


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"{name} must be a square 2-d array, got shape {a.shape}")
    return a


def hermiticity_deviation(a) -> float:
    """max|A[i,j] - conj(A[j,i])| over all entries."""
    a = _as_square(a)
    return float(np.max(np.abs(a - a.conj().T)))


@dataclass(frozen=True)
class EigenSystem:
    """Full decomposition of a Hermitian matrix.

    values   -- real eigenvalues, ascending (ties allowed)
    vectors  -- unit-norm eigenvectors, one column per value
    residual -- max over i of the inf-norm of A v_i - lambda_i v_i

    Eigenvector global phases are unspecified; downstream gauge fixing owns
    them.  Inside a degenerate cluster the basis is an arbitrary orthonormal
    choice and callers must not rely on it.
    """

    values: np.ndarray
    vectors: np.ndarray
    residual: float

    @property
    def dim(self) -> int:
        return len(self.values)


def hermitian_eig(a, tol: float = EIG_RTOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, with contract checks.

    The input is gated on Hermiticity (1e-12 relative to max|A|), then
    symmetrized to (A + A^dag)/2 and decomposed.  The output satisfies
    ``residual <= tol * max|A|``; a violation or a LAPACK convergence
    failure raises ConvergenceError naming the dimension.

    Deterministic: identical input yields the identical decomposition.
    """
    a = _as_square(a)
    n = a.shape[0]
    maxabs = float(np.max(np.abs(a)))
    if maxabs == 0.0:
        return EigenSystem(np.zeros(n), np.eye(n, dtype=complex), 0.0)

    dev = float(np.max(np.abs(a - a.conj().T)))
    bound = HERMITICITY_RTOL * maxabs
    if dev > bound:
        raise HermiticityError(dev, bound)

    h = 0.5 * (a + a.conj().T)
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - malformed input
        raise ConvergenceError(
            f"eigendecomposition of a dim={n} matrix did not converge "
            f"within the solver's iteration cap ({exc})"
        ) from exc

    residual = float(np.max(np.abs(a @ vectors - vectors * values)))
    if residual > tol * maxabs:
        raise ConvergenceError(
            f"eigen-residual {residual:.3e} exceeds {tol:.1e} * max|A| "
            f"= {tol * maxabs:.3e} for a dim={n} matrix"
        )
    return EigenSystem(values, vectors, residual)


def expectation(a, v) -> float:
    """Re(v^dag A v) for Hermitian A and a unit-norm vector v.

    The imaginary part of v^dag A v is a numerical diagnostic and must stay
    below 1e-10; larger values indicate a non-Hermitian A or a broken vector.
    """
    a = _as_square(a)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape[0] != a.shape[0]:
        raise ValueError(f"dimension mismatch: A is {a.shape}, v has length {v.shape[0]}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"v must be unit norm, got |v| = {norm!r}")
    val = complex(np.vdot(v, a @ v))
    if abs(val.imag) > 1e-10:
        raise ValueError(
            f"imaginary part of v^dag A v is {val.imag:.3e} (> 1e-10); "
            "A is not Hermitian enough for an expectation value"
        )
    return float(val.real)


def commutator_deviation(a, b, target) -> float:
    """Frobenius norm of AB - BA - target."""
    a = _as_square(a, "A")
    b = _as_square(b, "B")
    target = _as_square(target, "target")
    if not (a.shape == b.shape == target.shape):
        raise ValueError(
            f"dimension mismatch: A {a.shape}, B {b.shape}, target {target.shape}"
        )
    return float(np.linalg.norm(a @ b - b @ a - target, "fro"))


def kron(a, b) -> np.ndarray:
    """Tensor product; block (i, j) of the result is A[i, j] * B."""
    a = _as_square(a, "A")
    b = _as_square(b, "B")
    return np.kron(a, b)
