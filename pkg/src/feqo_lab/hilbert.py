"""Truncated sideband (x) Fock Hilbert space and state/operator algebra.

Index convention: the flat index runs electron-major with the photon index
varying fastest, flat = ((n1_idx*S + n2_idx)*S + ...)*(N_max+1) + m.
Sideband windows are stored in increasing order, so the computational pair
appears as (-1/2, +1/2); computational-block extraction reorders to the
(e, g) = (+1/2, -1/2) gate convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .errors import BasisError, DomainError, TruncationError

__all__ = [
    "BasisSpec",
    "StateVector",
    "DensityOperator",
    "make_basis",
    "qubit_window",
    "default_window",
    "default_fock_cutoff",
    "coherent_state",
    "qubit_factor",
    "basis_ket",
    "fock_ket",
    "tensor_product",
    "partial_trace",
    "computational_block",
    "computational_labels",
    "computational_state_vector",
    "sideband_populations",
    "photon_populations",
    "photon_number_mean",
    "uhlmann_fidelity",
    "von_neumann_entropy",
    "purity",
]

E_LABEL = 0.5   # |e> sideband index
G_LABEL = -0.5  # |g> sideband index


def qubit_window() -> tuple[float, ...]:
    return (G_LABEL, E_LABEL)


def default_window(count: int = 6) -> tuple[float, ...]:
    """Symmetric half-integer window of the given even size, e.g. -5/2..5/2."""
    if count < 2 or count % 2:
        raise BasisError("sideband window size must be even and >= 2")
    half = count // 2
    return tuple(n + 0.5 for n in range(-half, half))


@dataclass(frozen=True)
class BasisSpec:
    """Truncated basis: num_electrons sideband ladders sharing one Fock mode."""

    num_electrons: int
    sideband_indices: tuple[float, ...]
    fock_cutoff: int

    def __post_init__(self):
        if self.num_electrons < 1:
            raise BasisError("need at least one electron")
        if self.fock_cutoff < 0:
            raise BasisError("fock_cutoff must be >= 0")
        win = self.sideband_indices
        if len(win) < 2:
            raise BasisError("sideband window needs at least two levels")
        steps = [round(2 * (b - a)) for a, b in zip(win, win[1:])]
        if any(s != 2 for s in steps):
            raise BasisError("sideband indices must be strictly increasing "
                             "with unit steps")
        if any(round(2 * n) % 2 == 0 for n in win):
            raise BasisError("sideband indices must be half-integers")
        if E_LABEL not in win or G_LABEL not in win:
            raise BasisError("window must contain the computational pair +-1/2")

    @property
    def sideband_count(self) -> int:
        return len(self.sideband_indices)

    @property
    def photon_dim(self) -> int:
        return self.fock_cutoff + 1

    @property
    def dimension(self) -> int:
        return self.sideband_count ** self.num_electrons * self.photon_dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.sideband_count,) * self.num_electrons + (self.photon_dim,)

    def sideband_position(self, label: float) -> int:
        try:
            return self.sideband_indices.index(label)
        except ValueError:
            raise BasisError(f"sideband {label} not in window") from None

    def encode(self, labels: Sequence[float], photon_n: int) -> int:
        """Flat index of (n_1, ..., n_N, m)."""
        if len(labels) != self.num_electrons:
            raise BasisError("wrong number of electron labels")
        if not 0 <= photon_n <= self.fock_cutoff:
            raise BasisError(f"photon number {photon_n} outside cutoff")
        flat = 0
        for lab in labels:
            flat = flat * self.sideband_count + self.sideband_position(lab)
        return flat * self.photon_dim + photon_n

    def decode(self, flat: int) -> tuple[tuple[float, ...], int]:
        """Inverse of encode."""
        if not 0 <= flat < self.dimension:
            raise BasisError(f"flat index {flat} out of range")
        flat, m = divmod(flat, self.photon_dim)
        labels = []
        for _ in range(self.num_electrons):
            flat, pos = divmod(flat, self.sideband_count)
            labels.append(self.sideband_indices[pos])
        return tuple(reversed(labels)), m


def make_basis(num_electrons: int, sideband_window: Iterable[float],
               fock_cutoff: int) -> BasisSpec:
    """Build a BasisSpec from a window of half-integer sideband indices."""
    return BasisSpec(num_electrons=num_electrons,
                     sideband_indices=tuple(sorted(sideband_window)),
                     fock_cutoff=int(fock_cutoff))


def default_fock_cutoff(alpha: complex) -> int:
    """Cutoff rule ceil(|a|^2 + 6|a| + 10): Poisson tail < 1e-8 for |a| <= 12."""
    a = abs(alpha)
    return int(math.ceil(a * a + 6.0 * a + 10.0))


@dataclass
class StateVector:
    """Pure state on a BasisSpec."""

    basis: BasisSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (self.basis.dimension,):
            raise BasisError(f"amplitude vector has length {amp.shape}, basis "
                             f"dimension is {self.basis.dimension}")
        self.amplitudes = amp

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def require_normalized(self, tol: float = 1e-9) -> "StateVector":
        if abs(self.norm - 1.0) > tol:
            raise DomainError(f"state norm {self.norm} deviates from 1 "
                              f"beyond {tol}")
        return self

    def normalized(self) -> "StateVector":
        return StateVector(self.basis, self.amplitudes / self.norm)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.basis.shape)


@dataclass
class DensityOperator:
    """Hermitian, positive-semidefinite, unit-trace operator on a subsystem."""

    matrix: np.ndarray
    labels: tuple = ()
    subsystem: str = ""

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)

    def validate(self, trace_tol: float = 1e-9, herm_tol: float = 1e-10,
                 psd_tol: float = 1e-10) -> "DensityOperator":
        m = self.matrix
        if abs(np.trace(m).real - 1.0) > trace_tol or abs(np.trace(m).imag) > trace_tol:
            raise DomainError(f"trace {np.trace(m)} deviates from 1")
        if np.max(np.abs(m - m.conj().T)) > herm_tol:
            raise DomainError("matrix is not Hermitian within tolerance")
        if np.linalg.eigvalsh(m).min() < -psd_tol:
            raise DomainError("matrix has negative eigenvalues beyond tolerance")
        return self


def coherent_state(alpha: complex, fock_cutoff: int,
                   tail_tol: float = 1e-8) -> np.ndarray:
    """Photon-factor amplitudes of |alpha> truncated at fock_cutoff.

    Amplitudes follow the recursion a_{m+1} = a_m * alpha / sqrt(m+1) and are
    renormalized after truncation.  Raises TruncationError with a cutoff hint
    when the discarded Poisson tail mass reaches tail_tol.
    """
    if fock_cutoff < 0:
        raise BasisError("fock_cutoff must be >= 0")
    nbar = abs(alpha) ** 2
    tail = float(stats.poisson.sf(fock_cutoff, nbar)) if nbar > 0 else 0.0
    if tail >= tail_tol:
        needed = int(stats.poisson.isf(tail_tol, nbar)) + 1
        while stats.poisson.sf(needed, nbar) >= tail_tol:
            needed += 1
        raise TruncationError(
            f"Poisson tail {tail:.3e} beyond cutoff {fock_cutoff} exceeds "
            f"{tail_tol:.1e}; need fock_cutoff >= {needed}",
            required_cutoff=needed)
    amps = np.zeros(fock_cutoff + 1, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * nbar)
    for m in range(fock_cutoff):
        amps[m + 1] = amps[m] * alpha / math.sqrt(m + 1)
    return amps / np.linalg.norm(amps)


def fock_ket(n: int, fock_cutoff: int) -> np.ndarray:
    """Photon factor |n>."""
    if not 0 <= n <= fock_cutoff:
        raise BasisError(f"Fock level {n} outside cutoff {fock_cutoff}")
    v = np.zeros(fock_cutoff + 1, dtype=np.complex128)
    v[n] = 1.0
    return v


def qubit_factor(theta: float, window: Sequence[float] = qubit_window()) -> np.ndarray:
    """Electron factor cos(theta/2)|e> + sin(theta/2)|g> on a sideband window."""
    v = np.zeros(len(window), dtype=np.complex128)
    v[list(window).index(E_LABEL)] = math.cos(theta / 2.0)
    v[list(window).index(G_LABEL)] = math.sin(theta / 2.0)
    return v


def basis_ket(basis: BasisSpec, labels: Sequence[float], photon_n: int = 0) -> StateVector:
    """Computational basis vector |n_1 ... n_N> (x) |m>."""
    amps = np.zeros(basis.dimension, dtype=np.complex128)
    amps[basis.encode(labels, photon_n)] = 1.0
    return StateVector(basis, amps)


def tensor_product(basis: BasisSpec, factors: Sequence[np.ndarray]) -> StateVector:
    """Assemble a product state from per-electron factors plus a photon factor.

    Factor order matches the index codec: electron 1, ..., electron N, photon.
    """
    if len(factors) != basis.num_electrons + 1:
        raise BasisError(f"need {basis.num_electrons + 1} factors "
                         f"(electrons then photon), got {len(factors)}")
    sizes = [basis.sideband_count] * basis.num_electrons + [basis.photon_dim]
    amps = np.ones(1, dtype=np.complex128)
    for factor, size in zip(factors, sizes):
        f = np.asarray(factor, dtype=np.complex128).ravel()
        if f.shape != (size,):
            raise BasisError(f"factor of length {f.shape[0]} does not match "
                             f"subsystem dimension {size}")
        amps = np.kron(amps, f)
    return StateVector(basis, amps)


def _resolve_keep(basis: BasisSpec, keep) -> tuple[int, ...]:
    n_ax = basis.num_electrons + 1
    if isinstance(keep, str):
        if keep == "electrons":
            return tuple(range(basis.num_electrons))
        if keep == "photon":
            return (basis.num_electrons,)
        raise BasisError(f"invalid subsystem selector {keep!r}")
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    try:
        axes = tuple(sorted(int(k) for k in keep))
    except (TypeError, ValueError):
        raise BasisError(f"invalid subsystem selector {keep!r}") from None
    if not axes or len(set(axes)) != len(axes) \
            or any(a < 0 or a >= n_ax for a in axes):
        raise BasisError(f"invalid subsystem selector {keep!r}")
    return axes


def partial_trace(obj, keep="electrons", basis: BasisSpec | None = None) -> DensityOperator:
    """Reduced density operator over the kept subsystems.

    keep is "electrons", "photon", or a sequence of subsystem axes (electron
    indices 0..N-1, the photon axis is N).
    """
    if isinstance(obj, StateVector):
        basis = obj.basis
        axes = _resolve_keep(basis, keep)
        traced = tuple(a for a in range(basis.num_electrons + 1) if a not in axes)
        psi = obj.tensor()
        rho = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    else:
        if basis is None:
            raise BasisError("partial_trace of a raw matrix needs a basis")
        axes = _resolve_keep(basis, keep)
        mat = obj.matrix if isinstance(obj, DensityOperator) else np.asarray(obj)
        n_ax = basis.num_electrons + 1
        rho = mat.reshape(basis.shape + basis.shape)
        traced = [a for a in range(n_ax) if a not in axes]
        for k, a in enumerate(traced):
            ax = a - sum(1 for t in traced[:k] if t < a)
            n_now = rho.ndim // 2
            rho = np.trace(rho, axis1=ax, axis2=ax + n_now)
    d = int(round(math.sqrt(rho.size)))
    labels = tuple("photon" if a == basis.num_electrons else f"electron{a}"
                   for a in axes)
    return DensityOperator(rho.reshape(d, d), labels=labels,
                           subsystem="+".join(labels))


def computational_labels(num_qubits: int) -> tuple[str, ...]:
    """Basis labels 'e...e' ... 'g...g' of the qubit block, e-first ordering."""
    labels = []
    for i in range(2 ** num_qubits):
        bits = format(i, f"0{num_qubits}b")
        labels.append("".join("e" if b == "0" else "g" for b in bits))
    return tuple(labels)


def computational_block(rho_electrons: np.ndarray | DensityOperator,
                        basis: BasisSpec) -> np.ndarray:
    """Project the reduced electron operator onto the +-1/2 qubit block.

    Rows/columns are reordered to the gate convention |e...e> ... |g...g>.
    The block is not renormalized: missing trace is sideband leakage.
    """
    mat = rho_electrons.matrix if isinstance(rho_electrons, DensityOperator) \
        else np.asarray(rho_electrons)
    n = basis.num_electrons
    if mat.shape != (basis.sideband_count ** n,) * 2:
        raise BasisError("operator is not on the full electron subsystem")
    pos_e = basis.sideband_position(E_LABEL)
    pos_g = basis.sideband_position(G_LABEL)
    idx = []
    for i in range(2 ** n):
        bits = format(i, f"0{n}b")
        flat = 0
        for b in bits:
            flat = flat * basis.sideband_count + (pos_e if b == "0" else pos_g)
        idx.append(flat)
    idx = np.asarray(idx)
    return mat[np.ix_(idx, idx)]


def computational_state_vector(state: StateVector) -> np.ndarray:
    """Pure-state amplitudes on the qubit block, reordered to |e...e>..|g...g>.

    Requires a trivial photon factor (fock_cutoff = 0) and the +-1/2 window,
    i.e. a basis that already is the qubit register.
    """
    basis = state.basis
    if basis.photon_dim != 1 or basis.sideband_indices != qubit_window():
        raise BasisError("state is not on a bare qubit-register basis")
    n = basis.num_electrons
    pos_e = basis.sideband_position(E_LABEL)
    out = np.empty(2 ** n, dtype=np.complex128)
    for i in range(2 ** n):
        bits = format(i, f"0{n}b")
        flat = 0
        for b in bits:
            flat = flat * 2 + (pos_e if b == "0" else 1 - pos_e)
        out[i] = state.amplitudes[flat]
    return out


def sideband_populations(state: StateVector, electron_index: int = 0) -> dict[float, float]:
    """Per-sideband occupation probabilities of one electron."""
    basis = state.basis
    if not 0 <= electron_index < basis.num_electrons:
        raise BasisError(f"no electron {electron_index}")
    probs = np.abs(state.tensor()) ** 2
    axes = tuple(a for a in range(basis.num_electrons + 1) if a != electron_index)
    pops = probs.sum(axis=axes)
    return {n: float(p) for n, p in zip(basis.sideband_indices, pops)}


def photon_populations(state: StateVector) -> np.ndarray:
    probs = np.abs(state.tensor()) ** 2
    return probs.sum(axis=tuple(range(state.basis.num_electrons)))


def photon_number_mean(state: StateVector) -> float:
    pops = photon_populations(state)
    return float(np.dot(np.arange(pops.size), pops))


def _sqrtm_psd(mat: np.ndarray, psd_tol: float) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    if w.min() < -psd_tol:
        raise DomainError(f"operator has negative eigenvalue {w.min():.3e} "
                          "beyond tolerance")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def uhlmann_fidelity(rho, sigma, psd_tol: float = 1e-10) -> float:
    """F = [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2 for two PSD operators.

    Evaluated as the squared trace norm of sqrt(rho) sqrt(sigma) (the same
    quantity), whose singular values are symmetric in the operands.
    """
    a = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=np.complex128)
    b = sigma.matrix if isinstance(sigma, DensityOperator) else np.asarray(sigma, dtype=np.complex128)
    if a.shape != b.shape:
        raise BasisError("fidelity operands must share a subsystem")
    sv = np.linalg.svd(_sqrtm_psd(a, psd_tol) @ _sqrtm_psd(b, psd_tol),
                       compute_uv=False)
    f = float(np.sum(sv) ** 2)
    if f > 1.0 + 1e-6:
        raise DomainError(f"fidelity {f} exceeds 1; operands are not "
                          "subnormalized density operators")
    return min(f, 1.0)


def von_neumann_entropy(rho) -> float:
    """S = -Tr(rho ln rho) in nats; eigenvalues below 1e-14 count as zero."""
    mat = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    w = np.linalg.eigvalsh(mat)
    w = w[w > 1e-14]
    return max(float(-np.sum(w * np.log(w))), 0.0)


def purity(rho) -> float:
    mat = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    return float(np.real(np.trace(mat @ mat)))
