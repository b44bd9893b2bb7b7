"""Builders for the quantized photon-electron Hamiltonians.

All matrices are in eV on a BasisSpec.  Constant diagonal offsets (the
hbar*omega_L/2 vacuum term and the electron center energy) are dropped from
every builder; they contribute a global phase only.  Operators are Hermitian
by construction: only the real diagonal and the strictly upper triangle are
stored, the mirror is generated.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import BasisError, DomainError
from .hilbert import BasisSpec, E_LABEL, G_LABEL, StateVector, qubit_window
from .physpar import CODATA2018, ScenarioParams

__all__ = [
    "ModelKind",
    "HermitianOperator",
    "build_pinem",
    "build_jc",
    "build_jc_interaction",
    "build_tc",
    "build_dispersive_xy",
    "excitation_observable",
    "build_model",
]

_DENSE_LIMIT = 256  # below this dimension matvecs run on the dense matrix


class ModelKind(enum.Enum):
    PINEM_FULL = "pinem_full"
    JC_LAB = "jc_lab"
    JC_INTERACTION = "jc_interaction"
    TC_LAB = "tc_lab"
    DISPERSIVE_XY = "dispersive_xy"


@dataclass
class HermitianOperator:
    """Sparse Hermitian matrix: real diagonal + strictly upper triangle."""

    basis: BasisSpec
    diag: np.ndarray
    upper: sparse.csr_matrix

    _csr: sparse.csr_matrix | None = field(default=None, repr=False)
    _dense: np.ndarray | None = field(default=None, repr=False)
    _eig: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=np.float64)
        n = self.basis.dimension
        if self.diag.shape != (n,) or self.upper.shape != (n, n):
            raise BasisError("operator storage does not match basis dimension")
        low = sparse.tril(self.upper, k=0)
        if low.nnz:
            raise BasisError("upper storage contains diagonal/lower entries")

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.diag)) + 2 * self.upper.nnz

    def to_csr(self) -> sparse.csr_matrix:
        if self._csr is None:
            self._csr = (sparse.diags(self.diag) + self.upper
                         + self.upper.conj().T).tocsr()
        return self._csr

    def to_dense(self) -> np.ndarray:
        if self._dense is None:
            self._dense = self.to_csr().toarray()
        return self._dense

    def matvec(self, v: np.ndarray) -> np.ndarray:
        if self.dimension <= _DENSE_LIMIT:
            return self.to_dense() @ v
        return self.to_csr() @ v

    def diagonal(self) -> np.ndarray:
        return self.diag.copy()

    def expectation(self, state: StateVector | np.ndarray) -> float:
        v = state.amplitudes if isinstance(state, StateVector) else np.asarray(state)
        return float(np.real(np.vdot(v, self.matvec(v))))

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached dense Hermitian eigendecomposition (w, V)."""
        if self._eig is None:
            w, v = np.linalg.eigh(self.to_dense())
            self._eig = (w, v)
        return self._eig

    def gershgorin_interval(self) -> tuple[float, float]:
        """Rigorous enclosure [lo, hi] of the spectrum from Gershgorin discs."""
        offdiag = self.to_csr().copy()
        offdiag.setdiag(0.0)
        radius = np.asarray(np.abs(offdiag).sum(axis=1)).ravel()
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))


class _Builder:
    """Accumulates diagonal entries and strictly-upper couplings."""

    def __init__(self, basis: BasisSpec):
        self.basis = basis
        self.diag = np.zeros(basis.dimension)
        self.rows: list[int] = []
        self.cols: list[int] = []
        self.vals: list[float] = []

    def add_coupling(self, i: int, j: int, value: float):
        if i == j:
            raise BasisError("coupling must be off-diagonal")
        r, c = (i, j) if i < j else (j, i)
        self.rows.append(r)
        self.cols.append(c)
        self.vals.append(value)

    def finish(self) -> HermitianOperator:
        n = self.basis.dimension
        upper = sparse.csr_matrix(
            (np.asarray(self.vals, dtype=np.complex128), (self.rows, self.cols)),
            shape=(n, n))
        upper.sum_duplicates()
        return HermitianOperator(self.basis, self.diag, upper)


def _electron_block_iter(basis: BasisSpec, electron: int):
    """Yield (prefix, suffix) composite indices around one electron axis."""
    s = basis.sideband_count
    n = basis.num_electrons
    pre_dim = s ** electron
    post_dim = s ** (n - 1 - electron)
    for a in range(pre_dim):
        for b in range(post_dim):
            yield a, b, post_dim


def _flat(basis: BasisSpec, a: int, pos: int, b: int, post_dim: int, m: int) -> int:
    s = basis.sideband_count
    return ((a * s + pos) * post_dim + b) * basis.photon_dim + m


def build_pinem(params: ScenarioParams, basis: BasisSpec) -> HermitianOperator:
    """Full multi-sideband Hamiltonian with one shared quantized mode.

    Diagonal: n*hbar*v0*q + n^2*hbar*omega_rec*dispersion_scale per electron
    plus hbar*omega_L*m.  Off-diagonal: hbar*g*sqrt(m+1) ladder elements
    between (n-1, m+1) and (n, m); with exact_kn each element is scaled by
    k_{n-1}/k0 instead of the k_n ~ k0 approximation.
    """
    if basis.sideband_count < 2:
        raise BasisError("PINEM needs at least two sidebands")
    hbar = params.constants.hbar_eV_fs
    wq = params.qubit_splitting_rad_per_fs
    w_rec = params.coupling.omega_rec_rad_per_fs * params.dispersion_scale
    wl = params.drive.omega_L_rad_per_fs
    g = params.coupling.g_rad_per_fs
    q_over_k0 = params.drive.q_per_m / params.electron.k0_per_m

    b = _Builder(basis)
    window = basis.sideband_indices
    site = np.array([hbar * (n * wq + n * n * w_rec) for n in window])
    # diagonal: sum of per-electron on-site energies + photon ladder
    for full in range(basis.dimension):
        labels, m = basis.decode(full)
        b.diag[full] = sum(site[window.index(n)] for n in labels) + hbar * wl * m
    # ladder: (n-1, m+1) <-> (n, m) per electron
    for el in range(basis.num_electrons):
        for a, c, post in _electron_block_iter(basis, el):
            for pos in range(1, basis.sideband_count):
                scale = 1.0
                if params.exact_kn:
                    scale = 1.0 + window[pos - 1] * q_over_k0
                for m in range(basis.photon_dim - 1):
                    i = _flat(basis, a, pos, c, post, m)
                    j = _flat(basis, a, pos - 1, c, post, m + 1)
                    b.add_coupling(i, j, hbar * g * np.sqrt(m + 1) * scale)
    return b.finish()


def _require_qubit_window(basis: BasisSpec):
    if basis.sideband_indices != qubit_window():
        raise BasisError("this model requires exactly the +-1/2 sideband pair")


def build_jc(params: ScenarioParams, basis: BasisSpec) -> HermitianOperator:
    """(hbar v0 q/2) sigma_z + hbar omega_L a^dag a + hbar g (s+ a + s- a^dag)."""
    _require_qubit_window(basis)
    if basis.num_electrons != 1:
        raise BasisError("build_jc is single-electron; use build_tc for N > 1")
    return build_tc(params, basis)


def build_tc(params: ScenarioParams, basis: BasisSpec,
             active: tuple[int, ...] | None = None) -> HermitianOperator:
    """Tavis-Cummings: per-electron JC terms sharing one photon mode.

    active restricts the coupling to a subset of electrons (drive addressing);
    idle electrons keep their sigma_z term but exchange no photons.
    """
    _require_qubit_window(basis)
    hbar = params.constants.hbar_eV_fs
    wq = params.qubit_splitting_rad_per_fs
    wl = params.drive.omega_L_rad_per_fs
    g = params.coupling.g_rad_per_fs
    if active is None:
        active = tuple(range(basis.num_electrons))
    if any(not 0 <= el < basis.num_electrons for el in active):
        raise BasisError(f"active electrons {active} outside basis")

    b = _Builder(basis)
    for full in range(basis.dimension):
        labels, m = basis.decode(full)
        sz = sum(1.0 if n == E_LABEL else -1.0 for n in labels)
        b.diag[full] = hbar * (wq * sz / 2.0 + wl * m)
    pos_g = basis.sideband_position(G_LABEL)
    for el in active:
        for a, c, post in _electron_block_iter(basis, el):
            for m in range(basis.photon_dim - 1):
                i = _flat(basis, a, pos_g + 1, c, post, m)     # |e, m>
                j = _flat(basis, a, pos_g, c, post, m + 1)     # |g, m+1>
                b.add_coupling(i, j, hbar * g * np.sqrt(m + 1))
    return b.finish()


def build_jc_interaction(g_rad_per_fs: float, basis: BasisSpec) -> HermitianOperator:
    """Interaction-picture JC at resonance: hbar g (s+ a + s- a^dag) only."""
    _require_qubit_window(basis)
    hbar = _hbar()
    b = _Builder(basis)
    pos_g = basis.sideband_position(G_LABEL)
    for el in range(basis.num_electrons):
        for a, c, post in _electron_block_iter(basis, el):
            for m in range(basis.photon_dim - 1):
                i = _flat(basis, a, pos_g + 1, c, post, m)
                j = _flat(basis, a, pos_g, c, post, m + 1)
                b.add_coupling(i, j, hbar * g_rad_per_fs * np.sqrt(m + 1))
    return b.finish()


def build_dispersive_xy(J_rad_per_fs: float, basis: BasisSpec,
                        pair: tuple[int, int] = (0, 1)) -> HermitianOperator:
    """Effective exchange hbar J (s+_i s-_j + s-_i s+_j) on one qubit pair.

    J may carry the physical sign g^2/(v0 q - omega_L).  The photon factor is
    ignored (kept as an identity), matching the adiabatic elimination.
    """
    _require_qubit_window(basis)
    i_el, j_el = pair
    if i_el == j_el or any(not 0 <= e < basis.num_electrons for e in pair):
        raise BasisError(f"invalid qubit pair {pair}")
    hbar = _hbar()
    b = _Builder(basis)
    s = basis.sideband_count
    n = basis.num_electrons
    pos_e = basis.sideband_position(E_LABEL)
    pos_g = basis.sideband_position(G_LABEL)
    for labels in itertools.product(range(s), repeat=n):
        if labels[i_el] == pos_e and labels[j_el] == pos_g:
            swapped = list(labels)
            swapped[i_el], swapped[j_el] = pos_g, pos_e
            fa = 0
            fb = 0
            for x, y in zip(labels, swapped):
                fa = fa * s + x
                fb = fb * s + y
            for m in range(basis.photon_dim):
                b.add_coupling(fa * basis.photon_dim + m,
                               fb * basis.photon_dim + m,
                               hbar * J_rad_per_fs)
    return b.finish()


def _hbar() -> float:
    return CODATA2018.hbar_eV_fs


def excitation_observable(basis: BasisSpec) -> HermitianOperator:
    """N_tot = sum_e sum_n n c^dag_n c_n + a^dag a (diagonal, dimensionless)."""
    b = _Builder(basis)
    for full in range(basis.dimension):
        labels, m = basis.decode(full)
        b.diag[full] = sum(labels) + m
    return b.finish()


def build_model(kind: ModelKind, params: ScenarioParams, basis: BasisSpec,
                active: tuple[int, ...] | None = None) -> HermitianOperator:
    """Dispatch a ModelKind to its builder with scenario-derived parameters."""
    if kind == ModelKind.PINEM_FULL:
        return build_pinem(params, basis)
    if kind == ModelKind.JC_LAB:
        return build_jc(params, basis)
    if kind == ModelKind.JC_INTERACTION:
        return build_jc_interaction(params.coupling.g_rad_per_fs, basis)
    if kind == ModelKind.TC_LAB:
        return build_tc(params, basis, active=active)
    if kind == ModelKind.DISPERSIVE_XY:
        if params.coupling.J_signed_rad_per_fs is None:
            raise DomainError("dispersive model needs a nonzero detuning")
        pair = active if active is not None else (0, 1)
        return build_dispersive_xy(params.coupling.J_signed_rad_per_fs, basis,
                                   pair=tuple(pair))
    raise DomainError(f"unknown model kind {kind}")
