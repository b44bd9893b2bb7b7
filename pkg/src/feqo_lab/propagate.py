"""Norm-conserving time evolution under a constant Hermitian operator.

Two routes: EIGEN_ORACLE diagonalizes once and applies exact phase factors;
FIXED_STEP advances in fixed intervals, applying the propagator of each
interval as a Chebyshev polynomial expansion of exp(-i H dt / hbar) evaluated
to machine precision over a Gershgorin enclosure of the spectrum.  The two
routes are algorithmically independent and are cross-checked in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import BasisError, DomainError, PropagationError
from .hamiltonian import HermitianOperator
from .hilbert import StateVector, partial_trace, von_neumann_entropy
from .physpar import CODATA2018

__all__ = ["EIGEN_ORACLE", "FIXED_STEP", "PropagatorConfig", "Trajectory",
           "propagate", "propagate_eigen"]

EIGEN_ORACLE = "eigen"
FIXED_STEP = "fixed_step"

_HBAR = CODATA2018.hbar_eV_fs


@dataclass(frozen=True)
class PropagatorConfig:
    method: str = EIGEN_ORACLE
    step_dt_fs: float | None = None        # FIXED_STEP substep; defaults to the sample interval
    sample_every_fs: float | None = None   # defaults to total_time / 200
    norm_tol: float = 1e-8
    eigen_dim_cap: int = 4000
    entropy_subsystem: str | tuple = "electrons"

    def __post_init__(self):
        if self.method not in (EIGEN_ORACLE, FIXED_STEP):
            raise DomainError(f"unknown propagation method {self.method!r}")
        if self.step_dt_fs is not None and self.step_dt_fs <= 0:
            raise DomainError("step_dt_fs must be positive")
        if (self.step_dt_fs is not None and self.sample_every_fs is not None
                and self.sample_every_fs < self.step_dt_fs):
            raise DomainError("sample_every_fs must be >= step_dt_fs")


@dataclass
class Trajectory:
    """Sampled observables along one constant-Hamiltonian evolution."""

    times_fs: np.ndarray
    populations: np.ndarray          # (n_samples, num_electrons, n_sidebands)
    photon_mean: np.ndarray
    entropy_nats: np.ndarray
    norm: np.ndarray
    final_state: StateVector
    basis: object = field(repr=False, default=None)

    def computational_populations(self) -> np.ndarray:
        """(n_samples, num_electrons, 2) populations on (g, e) = (-1/2, +1/2)."""
        win = list(self.basis.sideband_indices)
        cols = [win.index(-0.5), win.index(0.5)]
        return self.populations[:, :, cols]

    def leakage(self) -> np.ndarray:
        """Per-sample leakage outside +-1/2, averaged over electrons."""
        comp = self.computational_populations().sum(axis=2)
        return 1.0 - comp.mean(axis=1)


def _sample_metrics(basis, amps: np.ndarray, entropy_subsystem):
    state = StateVector(basis, amps)
    probs = np.abs(state.tensor()) ** 2
    pops = np.empty((basis.num_electrons, basis.sideband_count))
    for el in range(basis.num_electrons):
        axes = tuple(a for a in range(basis.num_electrons + 1) if a != el)
        pops[el] = probs.sum(axis=axes)
    ph = probs.sum(axis=tuple(range(basis.num_electrons)))
    photon_mean = float(np.dot(np.arange(ph.size), ph))
    rho = partial_trace(state, keep=entropy_subsystem)
    entropy = von_neumann_entropy(rho)
    return pops, photon_mean, entropy, float(np.linalg.norm(amps))


def propagate_eigen(H: HermitianOperator, psi0: StateVector, t_fs: float,
                    dim_cap: int = 4000) -> StateVector:
    """Exact evolution psi(t) = V exp(-i L t / hbar) V^dag psi0."""
    if H.basis is not psi0.basis and H.basis != psi0.basis:
        raise BasisError("operator and state live on different bases")
    if H.dimension > dim_cap:
        raise PropagationError(
            f"dimension {H.dimension} exceeds the eigen-oracle cap {dim_cap}; "
            "use FIXED_STEP")
    w, v = H.eigensystem()
    coeff = v.conj().T @ psi0.amplitudes
    return StateVector(psi0.basis, v @ (np.exp(-1j * w * t_fs / _HBAR) * coeff))


class _ChebyshevStepper:
    """Applies exp(-i H dt / hbar) via a Chebyshev expansion on [lo, hi]."""

    def __init__(self, H: HermitianOperator, dt_fs: float):
        lo, hi = H.gershgorin_interval()
        half = 0.5 * (hi - lo)
        self.center = 0.5 * (hi + lo)
        self.radius = half * 1.01 + 1e-12   # small pad keeps the map inside [-1, 1]
        self.dt = dt_fs
        self.z = self.radius * dt_fs / _HBAR
        self.phase = np.exp(-1j * self.center * dt_fs / _HBAR)
        k_max = int(math.ceil(self.z + 15.0 * (self.z + 16.0) ** (1.0 / 3.0) + 24.0))
        ks = np.arange(k_max + 1)
        bessel = special.jv(ks, self.z)
        if not np.all(np.isfinite(bessel)) or abs(bessel[-1]) > 1e-13:
            raise PropagationError(
                "Chebyshev expansion did not converge: step too large")
        self.coeff = (2.0 * (-1j) ** ks) * bessel
        self.coeff[0] = bessel[0]
        # drop the negligible tail, keeping a machine-precision remainder
        keep = max(np.nonzero(np.abs(self.coeff) > 1e-16)[0].max() + 1, 2)
        self.coeff = self.coeff[:keep]
        self._H = H

    def _apply_scaled(self, v: np.ndarray) -> np.ndarray:
        return (self._H.matvec(v) - self.center * v) / self.radius

    def step(self, v: np.ndarray) -> np.ndarray:
        t_prev = v
        t_cur = self._apply_scaled(v)
        acc = self.coeff[0] * t_prev + self.coeff[1] * t_cur
        for ck in self.coeff[2:]:
            t_prev, t_cur = t_cur, 2.0 * self._apply_scaled(t_cur) - t_prev
            acc += ck * t_cur
        return self.phase * acc


def propagate(H: HermitianOperator, psi0: StateVector, total_time_fs: float,
              config: PropagatorConfig | None = None) -> Trajectory:
    """Evolve psi0 for total_time_fs, sampling populations, <n>, entropy, norm.

    Samples sit at k * sample_every for k = 0 .. floor(T / sample_every); the
    final state is evolved through the full duration.  Norm drift beyond
    config.norm_tol aborts with a step-size diagnostic.
    """
    if total_time_fs < 0:
        raise DomainError("total_time must be >= 0")
    cfg = config or PropagatorConfig()
    basis = psi0.basis
    if H.basis != basis:
        raise BasisError("operator and state live on different bases")

    if total_time_fs == 0:
        n_samples = 1
        sample_dt = 0.0
    else:
        sample_dt = cfg.sample_every_fs or total_time_fs / 200.0
        if sample_dt <= 0:
            raise DomainError("sample_every_fs must be positive")
        n_samples = int(math.floor(total_time_fs / sample_dt + 1e-12)) + 1

    times = np.array([k * sample_dt for k in range(n_samples)])
    pops = np.empty((n_samples, basis.num_electrons, basis.sideband_count))
    ph_mean = np.empty(n_samples)
    entropy = np.empty(n_samples)
    norms = np.empty(n_samples)

    def record(k: int, amps: np.ndarray):
        p, ph, s, nrm = _sample_metrics(basis, amps, cfg.entropy_subsystem)
        pops[k], ph_mean[k], entropy[k], norms[k] = p, ph, s, nrm
        if abs(nrm - 1.0) > cfg.norm_tol:
            raise PropagationError(
                f"norm drift {abs(nrm - 1.0):.3e} at t = {times[k]:.6g} fs "
                f"exceeds {cfg.norm_tol:.1e}: step too large")

    psi0.require_normalized(max(cfg.norm_tol, 1e-9))

    if cfg.method == EIGEN_ORACLE:
        if H.dimension > cfg.eigen_dim_cap:
            raise PropagationError(
                f"dimension {H.dimension} exceeds the eigen-oracle cap "
                f"{cfg.eigen_dim_cap}; use FIXED_STEP")
        w, v = H.eigensystem()
        coeff = v.conj().T @ psi0.amplitudes
        for k, t in enumerate(times):
            amps = v @ (np.exp(-1j * w * t / _HBAR) * coeff)
            record(k, amps)
        final = v @ (np.exp(-1j * w * total_time_fs / _HBAR) * coeff)
    else:
        amps = psi0.amplitudes.copy()
        record(0, amps)
        if n_samples > 1:
            sub = 1
            if cfg.step_dt_fs is not None and cfg.step_dt_fs < sample_dt:
                sub = int(math.ceil(sample_dt / cfg.step_dt_fs - 1e-12))
            stepper = _ChebyshevStepper(H, sample_dt / sub)
            for k in range(1, n_samples):
                for _ in range(sub):
                    amps = stepper.step(amps)
                record(k, amps)
        # residual stretch between the last sample and the full duration
        residual = total_time_fs - times[-1]
        if residual > 1e-12 * max(total_time_fs, 1.0):
            amps = _ChebyshevStepper(H, residual).step(amps)
        final = amps

    final_state = StateVector(basis, final)
    if abs(final_state.norm - 1.0) > cfg.norm_tol:
        raise PropagationError(
            f"final-state norm drift {abs(final_state.norm - 1.0):.3e} "
            f"exceeds {cfg.norm_tol:.1e}: step too large")
    return Trajectory(times_fs=times, populations=pops, photon_mean=ph_mean,
                      entropy_nats=entropy, norm=norms,
                      final_state=final_state, basis=basis)
