"""Charge-qubit / cavity Hamiltonian: series couplings and block diagonalization.

The rotating-wave Hamiltonian (hbar = 1, energies in units of the time
scale's inverse) is

    H = omega*(n + 1/2)
      + [E/2 - E_J0*sin(2 xi)*cos(pi*flux_ratio)*f(n)] * sigma_z
      + cos(2 xi)*E_J0*[a^k g_k(n) sigma_+  +  g_k(n) a^dag^k sigma_-]

with n the photon-number operator. The k-photon coupling g_k(n) and the
intensity-dependent shift f(n) are truncated power series in the reduced
flux phi; only the explicitly known leading terms are implemented (3 for
g_1, 2 each for g_2, g_3 and f). The field factor of the raising term is
the literal product a^k * g_k(n) (so the |e,n> <-> |g,n+k> element carries
g_k(n+k)); the lowering term is its Hermitian conjugate.

Because the interaction only connects |e,n> with |g,n+k>, H splits into
2x2 excitation blocks plus uncoupled corner states, which
:func:`block_eigensystem` diagonalizes analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateError, UnsupportedOrder
from .hilbert import FockBasis, QUBIT_E, QUBIT_G, flat_index, make_annihilation

#: Number of explicitly known series terms, by photon order (0 -> f(n)).
SERIES_TERMS = {0: 2, 1: 3, 2: 2, 3: 2}


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the junction-cavity Hamiltonian.

    ``E=None`` selects the k-photon resonance E = k*omega. ``series_order``
    caps the number of retained series terms; it clamps at the number of
    known terms since higher orders are not defined.
    """

    omega: float = 1.0
    E_J0: float = 1.0
    xi: float = math.pi / 2
    phi: float = 0.1
    flux_ratio: float = 0.5
    k: int = 1
    gamma: float = 0.0
    E: Optional[float] = None
    series_order: int = 3

    def __post_init__(self):
        if self.k not in (1, 2, 3):
            raise UnsupportedOrder(f"photon process order k={self.k} not in {{1, 2, 3}}")
        if not 0.0 < self.phi < 1.0:
            raise ValueError(f"phi={self.phi} outside the perturbative range (0, 1)")
        if self.gamma < 0.0:
            raise ValueError(f"gamma={self.gamma} must be >= 0")
        if self.series_order < 1:
            raise ValueError("series_order must be a positive integer")

    @property
    def level_splitting(self) -> float:
        """Qubit splitting E; defaults to the k-photon resonance k*omega."""
        return self.k * self.omega if self.E is None else self.E


@dataclass(frozen=True)
class DeviceParams:
    """Raw device energies used only to derive the mixing angle."""

    E_c: float
    gate_charge: float
    level_index: int
    E_J: float

    @property
    def epsilon(self) -> float:
        return 2.0 * self.E_c * (self.gate_charge - (2 * self.level_index + 1))


def derive_mixing_angle(dev: DeviceParams) -> float:
    """Mixing angle xi = arctan(E_J / 2 eps) / 2, principal branch.

    At the degeneracy point eps = 0 the limit arctan(+-inf)/2 = +-pi/4 is
    returned; if additionally E_J = 0 the angle is undefined.
    """
    eps = dev.epsilon
    if dev.E_J == 0.0 and eps == 0.0:
        raise DegenerateError("mixing angle undefined: E_J = 0 and epsilon = 0")
    if eps == 0.0:
        return math.copysign(math.pi / 4, dev.E_J)
    return 0.5 * math.atan(dev.E_J / (2.0 * eps))


def _series_terms(params: ModelParams, n, which: int):
    """Known series terms (before any trig prefactor), lowest order first."""
    phi = params.phi
    n = np.asarray(n, dtype=float)
    if which == 1:
        return [phi * np.ones_like(n),
                -0.5 * phi**3 * n,
                phi**5 * (2.0 * n**2 + 1.0) / 24.0]
    if which == 2:
        return [0.5 * phi**2 * np.ones_like(n),
                -2.0 / 24.0 * phi**4 * (2.0 * n - 1.0)]
    if which == 3:
        return [-phi**3 / 6.0 * np.ones_like(n),
                5.0 / 120.0 * phi**5 * (n - 1.0)]
    # which == 0: the sigma_z shift f(n)
    return [0.5 * phi**2 * (2.0 * n + 1.0),
            -3.0 / 24.0 * phi**4 * (2.0 * n**2 + 2.0 * n + 1.0)]


def _partial_sum(params: ModelParams, n, which: int) -> np.ndarray:
    terms = _series_terms(params, n, which)
    order = min(params.series_order, SERIES_TERMS[which])
    return sum(terms[:order])


def coupling_g(params: ModelParams, n) -> np.ndarray:
    """k-photon coupling series g_k(n); accepts a scalar or array photon number."""
    if params.k not in (1, 2, 3):
        raise UnsupportedOrder(f"no coupling series for k={params.k}")
    pref = math.cos(math.pi * params.flux_ratio) if params.k == 2 \
        else math.sin(math.pi * params.flux_ratio)
    out = pref * _partial_sum(params, n, params.k)
    return out if np.ndim(n) else float(out)


def stark_f(params: ModelParams, n) -> np.ndarray:
    """Intensity-dependent level-shift series f(n)."""
    out = _partial_sum(params, n, 0)
    return out if np.ndim(n) else float(out)


def _diagonal_energies(params: ModelParams, basis: FockBasis):
    """(E_e(n), E_g(n)) diagonal entries for photon numbers 0..dim-1."""
    n = np.arange(basis.dim, dtype=float)
    shift = 0.5 * params.level_splitting \
        - params.E_J0 * math.sin(2.0 * params.xi) * math.cos(math.pi * params.flux_ratio) \
        * stark_f(params, n)
    base = params.omega * (n + 0.5)
    return base + shift, base - shift


def block_coupling(params: ModelParams, n: int) -> float:
    """Off-diagonal element <e,n|H|g,n+k> = cos(2 xi) E_J0 g_k(n+k) sqrt((n+k)!/n!)."""
    k = params.k
    ladder = math.sqrt(math.prod(range(n + 1, n + k + 1)))
    return math.cos(2.0 * params.xi) * params.E_J0 * float(coupling_g(params, n + k)) * ladder


def build_hamiltonian(params: ModelParams, basis: FockBasis) -> np.ndarray:
    """Dense composite Hamiltonian in the flat |qubit fastest> ordering."""
    if basis.dim < params.k + 1:
        raise ValueError(f"dim={basis.dim} too small for k={params.k} (need >= k+1)")
    n = np.arange(basis.dim, dtype=float)
    e_up, e_dn = _diagonal_energies(params, basis)

    a = make_annihilation(basis)
    a_k = np.linalg.matrix_power(a, params.k)
    g_diag = np.diag(coupling_g(params, n))
    raising_field = a_k @ g_diag  # a^k applied after g_k(n)

    sigma_p = np.zeros((2, 2), dtype=complex)
    sigma_p[QUBIT_E, QUBIT_G] = 1.0

    h = np.kron(np.diag(e_up), np.diag([0.0, 1.0])).astype(complex)
    h += np.kron(np.diag(e_dn), np.diag([1.0, 0.0]))
    coupling = math.cos(2.0 * params.xi) * params.E_J0 * np.kron(raising_field, sigma_p)
    h += coupling + coupling.conj().T
    return h


@dataclass(frozen=True)
class Block:
    """One invariant 2x2 subspace spanned by (|e,n>, |g,n+k>)."""

    n: int
    index_e: int
    index_g: int
    e_plus: float
    e_minus: float
    rotation: np.ndarray  # columns: eigenvectors of [[E_e, kappa], [kappa, E_g]]
    coupling: float


@dataclass(frozen=True)
class BlockEigensystem:
    """Full eigensystem assembled from analytic 2x2 blocks.

    ``energies[j]`` belongs to eigenvector ``transform[:, j]``; block
    eigenvectors sit at the flat columns of the states they connect, so
    `transform` is block-sparse and exactly orthogonal.
    """

    basis: FockBasis
    blocks: tuple
    uncoupled: tuple  # (flat_index, energy) pairs
    energies: np.ndarray
    transform: np.ndarray

    def reassemble(self) -> np.ndarray:
        """U diag(E) U^dag; must reproduce build_hamiltonian."""
        return (self.transform * self.energies) @ self.transform.conj().T

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.energies)))


def block_eigensystem(params: ModelParams, basis: FockBasis) -> BlockEigensystem:
    """Diagonalize H block by block.

    Each pair (|e,n>, |g,n+k>) with n+k < dim forms a block with
    eigenvalues mean +- sqrt(delta^2 + kappa^2); |g,m> for m < k and
    |e,n> for n >= dim-k are uncoupled at their diagonal energy.
    """
    dim, k = basis.dim, params.k
    d = 2 * dim
    e_up, e_dn = _diagonal_energies(params, basis)

    energies = np.zeros(d)
    transform = np.zeros((d, d), dtype=complex)
    blocks = []
    uncoupled = []

    for n in range(dim - k):
        ie = flat_index(QUBIT_E, n)
        ig = flat_index(QUBIT_G, n + k)
        a, b = e_up[n], e_dn[n + k]
        kappa = block_coupling(params, n)
        mean, delta = 0.5 * (a + b), 0.5 * (a - b)
        r = math.hypot(delta, kappa)
        chi = math.atan2(kappa, delta)
        c, s = math.cos(chi / 2.0), math.sin(chi / 2.0)
        rot = np.array([[c, -s], [s, c]])
        e_plus, e_minus = mean + r, mean - r

        transform[ie, ie], transform[ig, ie] = c, s
        transform[ie, ig], transform[ig, ig] = -s, c
        energies[ie], energies[ig] = e_plus, e_minus
        blocks.append(Block(n, ie, ig, e_plus, e_minus, rot, kappa))

    for m in range(k):
        ig = flat_index(QUBIT_G, m)
        transform[ig, ig] = 1.0
        energies[ig] = e_dn[m]
        uncoupled.append((ig, float(e_dn[m])))
    for n in range(dim - k, dim):
        ie = flat_index(QUBIT_E, n)
        transform[ie, ie] = 1.0
        energies[ie] = e_up[n]
        uncoupled.append((ie, float(e_up[n])))

    return BlockEigensystem(basis, tuple(blocks), tuple(uncoupled), energies, transform)
