"""Finite Hilbert-space plumbing for the qubit + cavity composite.

The cavity is truncated to ``dim`` Fock states. Composite basis ordering is
fixed package-wide: the qubit index varies fastest,

    flat = 2*photon + (1 if excited else 0)

so |g,n> -> 2n and |e,n> -> 2n+1. This keeps each two-dimensional
excitation block of the interaction on consecutive indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError, InvalidState

QUBIT_G = 0
QUBIT_E = 1

#: Certified bound on the photon-number probability lost to truncation.
TAIL_BOUND = 1e-12


def flat_index(qubit: int, photon: int) -> int:
    """Flat composite index of |qubit, photon> (qubit in {QUBIT_G, QUBIT_E})."""
    return 2 * photon + qubit


def split_index(flat: int) -> tuple[int, int]:
    """Inverse of :func:`flat_index`; returns (qubit, photon)."""
    return flat % 2, flat // 2


@dataclass(frozen=True)
class FockBasis:
    """Truncated Fock space keeping photon numbers 0 .. dim-1."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    @property
    def composite_dim(self) -> int:
        return 2 * self.dim


@dataclass(frozen=True)
class QubitStateSpec:
    """Initial qubit state.

    ``mixed_diagonal``: rho = cos^2(theta)|e><e| + sin^2(theta)|g><g|.
    ``pure_superposition``: |psi> = cos(theta/2)|e> + sin(theta/2)|g>.
    """

    kind: str
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("mixed_diagonal", "pure_superposition"):
            raise ValueError(f"unknown qubit state kind {self.kind!r}")

    @property
    def weights(self) -> tuple[float, float]:
        """(w_e, w_g) populations of the diagonal mixture."""
        if self.kind != "mixed_diagonal":
            raise ValueError("weights only defined for mixed_diagonal")
        c = math.cos(self.theta) ** 2
        return c, 1.0 - c

    def matrix(self) -> np.ndarray:
        """2x2 density matrix in the (g, e) ordering."""
        rho = np.zeros((2, 2), dtype=complex)
        if self.kind == "mixed_diagonal":
            w_e, w_g = self.weights
            rho[QUBIT_E, QUBIT_E] = w_e
            rho[QUBIT_G, QUBIT_G] = w_g
        else:
            v = self.vector()
            rho = np.outer(v, v.conj())
        return rho

    def vector(self) -> np.ndarray:
        """State vector (pure_superposition only)."""
        if self.kind != "pure_superposition":
            raise ValueError("vector only defined for pure_superposition")
        v = np.zeros(2, dtype=complex)
        v[QUBIT_E] = math.cos(self.theta / 2)
        v[QUBIT_G] = math.sin(self.theta / 2)
        return v


@dataclass(frozen=True)
class FieldStateSpec:
    """Initial cavity state: coherent |alpha>, thermal(nbar), or Fock |n>."""

    kind: str
    alpha: complex = 0.0
    nbar: float = 0.0
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("coherent", "thermal", "fock"):
            raise ValueError(f"unknown field state kind {self.kind!r}")
        if self.kind == "thermal" and self.nbar < 0:
            raise ValueError("thermal nbar must be >= 0")
        if self.kind == "fock" and self.n < 0:
            raise ValueError("fock n must be >= 0")

    @property
    def mean_photons(self) -> float:
        if self.kind == "coherent":
            return abs(self.alpha) ** 2
        if self.kind == "thermal":
            return float(self.nbar)
        return float(self.n)

    @property
    def is_pure(self) -> bool:
        return self.kind != "thermal"


def make_annihilation(basis: FockBasis) -> np.ndarray:
    """Annihilation operator a with a[n-1, n] = sqrt(n) on the truncated space."""
    return np.diag(np.sqrt(np.arange(1, basis.dim, dtype=float)), k=1).astype(complex)


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Fock amplitudes b_n of |alpha> via the stable recurrence b_{n+1} = b_n * alpha / sqrt(n+1).

    Avoids explicit factorials, so it is safe at large mean photon number.
    Increasing dim only appends entries; retained amplitudes never change.
    """
    b = np.zeros(dim, dtype=complex)
    b[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(dim - 1):
        b[n + 1] = b[n] * alpha / math.sqrt(n + 1)
    return b


def thermal_weights(nbar: float, dim: int) -> np.ndarray:
    """Photon-number distribution p_n = nbar^n / (1+nbar)^(n+1) of a thermal state."""
    if nbar == 0.0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    n = np.arange(dim)
    log_p = n * math.log(nbar) - (n + 1) * math.log(1.0 + nbar)
    return np.exp(log_p)


def truncation_tail(fs: FieldStateSpec, dim: int) -> float:
    """Probability weight of the field state beyond photon number dim-1."""
    if fs.kind == "fock":
        return 0.0 if fs.n < dim else 1.0
    if fs.kind == "coherent":
        return float(max(0.0, 1.0 - np.sum(np.abs(coherent_amplitudes(fs.alpha, dim)) ** 2)))
    # geometric tail sums in closed form: sum_{n>=dim} p_n = (nbar/(1+nbar))^dim
    if fs.nbar == 0.0:
        return 0.0
    return math.exp(dim * (math.log(fs.nbar) - math.log(1.0 + fs.nbar)))


def default_dim(fs: FieldStateSpec, tail_bound: float = TAIL_BOUND) -> int:
    """Smallest adequate truncation for the field state.

    Coherent states use ceil(nbar + 10*sqrt(nbar) + 20), which comfortably
    beats the tail bound for any nbar. The thermal photon distribution is
    geometric, so the same rule would fail its own tail check already at
    nbar ~ 5; thermal states instead size the truncation directly from the
    closed-form geometric tail.
    """
    if fs.kind == "fock":
        return fs.n + 1
    nbar = fs.mean_photons
    if fs.kind == "coherent":
        dim = math.ceil(nbar + 10.0 * math.sqrt(nbar) + 20.0)
    else:
        if nbar == 0.0:
            return 1
        dim = math.ceil(math.log(tail_bound) / (math.log(nbar) - math.log(1.0 + nbar))) + 1
    while truncation_tail(fs, dim) >= tail_bound:  # guard, not expected to trigger
        dim += max(4, dim // 8)
    return dim


def field_vector(fs: FieldStateSpec, basis: FockBasis) -> np.ndarray:
    """Fock-space vector of a pure field state (coherent or fock)."""
    if not fs.is_pure:
        raise ValueError("thermal field state has no state vector")
    if fs.kind == "fock":
        if fs.n >= basis.dim:
            raise TruncationError(f"fock n={fs.n} outside truncation dim={basis.dim}")
        v = np.zeros(basis.dim, dtype=complex)
        v[fs.n] = 1.0
        return v
    return coherent_amplitudes(fs.alpha, basis.dim)


def field_matrix(fs: FieldStateSpec, basis: FockBasis) -> np.ndarray:
    """Field density matrix on the truncated space."""
    if fs.kind == "thermal":
        return np.diag(thermal_weights(fs.nbar, basis.dim)).astype(complex)
    v = field_vector(fs, basis)
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class DensityMatrix:
    """Dense composite density matrix with its defect diagnostics.

    The wrapped array is marked read-only; operations downstream treat
    states as immutable values.
    """

    matrix: np.ndarray
    basis: FockBasis = field(compare=False, default=None)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.basis is None:
            object.__setattr__(self, "basis", FockBasis(m.shape[0] // 2))
        if m.shape != (2 * self.basis.dim, 2 * self.basis.dim):
            raise ValueError(f"matrix shape {m.shape} inconsistent with dim {self.basis.dim}")

    @property
    def dim(self) -> int:
        """Composite dimension 2 * basis.dim."""
        return self.matrix.shape[0]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def trace_defect(self) -> float:
        return float(abs(np.trace(self.matrix).real - 1.0) + abs(np.trace(self.matrix).imag))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    def check(self, herm_tol=1e-12, trace_tol=1e-10, eig_floor=-1e-9) -> "DensityMatrix":
        """Assert the state invariants; raises InvalidState on violation."""
        h = self.hermiticity_defect()
        if h > herm_tol:
            raise InvalidState(f"hermiticity defect {h:.3e} > {herm_tol:.1e}")
        tr = self.trace_defect()
        if tr > trace_tol:
            raise InvalidState(f"trace defect {tr:.3e} > {trace_tol:.1e}")
        lo = self.min_eigenvalue()
        if lo < eig_floor:
            raise InvalidState(f"minimum eigenvalue {lo:.3e} < {eig_floor:.1e}")
        return self


def make_initial_state(qs: QubitStateSpec, fs: FieldStateSpec, basis: FockBasis,
                       tail_bound: float = TAIL_BOUND) -> DensityMatrix:
    """Composite product state rho_qubit (x) rho_field in the flat ordering.

    Raises TruncationError when the field tail beyond the truncation exceeds
    ``tail_bound`` (dim too small for the requested nbar or |alpha|^2).
    """
    tail = truncation_tail(fs, basis.dim)
    if tail >= tail_bound:
        raise TruncationError(
            f"field truncation tail {tail:.3e} >= {tail_bound:.1e} at dim={basis.dim}; "
            f"increase dim (mean photon number {fs.mean_photons:g})")
    rho = np.kron(field_matrix(fs, basis), qs.matrix())
    return DensityMatrix(rho, basis)


def composite_pure_vector(qubit_vec: np.ndarray, field_vec: np.ndarray) -> np.ndarray:
    """Flat composite vector of |field> (x) |qubit> under the package ordering."""
    return np.kron(field_vec, qubit_vec)


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced density matrix, tracing out the other subsystem.

    ``keep='qubit'`` returns the 2x2 junction state; ``keep='field'`` the
    dim x dim cavity state. Accepts a DensityMatrix or a bare array.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    dim = m.shape[0] // 2
    r = m.reshape(dim, 2, dim, 2)
    if keep == "qubit":
        return np.einsum("nanb->ab", r)
    if keep == "field":
        return np.einsum("nama->nm", r)
    raise ValueError(f"keep must be 'qubit' or 'field', got {keep!r}")


def sigma_z_composite(basis: FockBasis) -> np.ndarray:
    """sigma_z (x) identity_field in the flat ordering."""
    return np.kron(np.eye(basis.dim), np.diag([-1.0, 1.0])).astype(complex)
