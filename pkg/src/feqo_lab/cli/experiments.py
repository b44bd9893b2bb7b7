"""Experiment orchestration: named reproductions and result serialization.

Every run emits a summary JSON (the reproducibility record: config echo,
derived parameters, metrics, file paths), per-trajectory CSVs, and a
plot-data JSON.  Dimensioned numbers carry their unit in the key name.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .. import analytics, gates, hamiltonian, hilbert, physpar
from ..errors import DomainError, GratingError
from ..hamiltonian import ModelKind
from ..hilbert import StateVector
from ..propagate import PropagatorConfig, Trajectory
from ..propagate import propagate as propagate_state
from ..propagate import propagate_eigen
from .config import ConfigError, ScenarioConfig
from .presets import PRESETS, WSTATE_ANALOG_BASE

__all__ = ["ResultRecord", "run_experiment", "run_wstate", "run_gate",
           "export_density_matrix", "available_experiments"]

CSV_DIGITS = 9


@dataclass
class ResultRecord:
    """Config echo, derived parameters, metrics, and emitted file paths."""

    experiment: str
    config: dict[str, Any]
    derived: dict[str, Any]
    metrics: dict[str, Any]
    files: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def available_experiments() -> tuple[str, ...]:
    return tuple(PRESETS)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _write_json(path: Path, payload) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True)
                    + "\n")
    return str(path)


def _write_trajectory_csv(path: Path, traj: Trajectory) -> str:
    basis = traj.basis
    cols = ["t_fs"]
    for el in range(basis.num_electrons):
        for n in basis.sideband_indices:
            cols.append(f"pop_e{el + 1}_n{n:g}")
    cols += ["photon_mean", "entropy_nats", "norm"]
    lines = [",".join(cols)]
    fmt = f"{{:.{CSV_DIGITS}g}}"
    for k, t in enumerate(traj.times_fs):
        row = [fmt.format(t)]
        row += [fmt.format(p) for p in traj.populations[k].ravel()]
        row += [fmt.format(traj.photon_mean[k]),
                fmt.format(traj.entropy_nats[k]),
                fmt.format(traj.norm[k])]
        lines.append(",".join(row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def _plot_series(traj: Trajectory, tag: str) -> list[dict]:
    basis = traj.basis
    series = []
    for el in range(basis.num_electrons):
        for j, n in enumerate(basis.sideband_indices):
            series.append({"label": f"{tag} P(e{el + 1}, n={n:g})",
                           "values": traj.populations[:, el, j]})
    series.append({"label": f"{tag} photon mean", "values": traj.photon_mean})
    return series


def _write_plotdata(path: Path, times: np.ndarray, series: list[dict],
                    title: str) -> str:
    payload = {
        "title": title,
        "x": {"label": "t_fs", "values": times},
        "series": series,
    }
    return _write_json(path, payload)


def export_density_matrix(state_or_rho, path, basis=None,
                          qubit_subset=None) -> str:
    """Write a qubit-block density matrix as JSON (real/imag + labels).

    Accepts a StateVector (reduced over the photon and projected onto the
    computational block) or an explicit qubit-block matrix.  Subsets of more
    than 3 qubits are refused for full-matrix export.
    """
    if isinstance(state_or_rho, StateVector):
        basis = state_or_rho.basis
        rho_e = hilbert.partial_trace(state_or_rho, keep="electrons")
        block = hilbert.computational_block(rho_e, basis)
        n = basis.num_electrons
    else:
        block = np.asarray(state_or_rho.matrix
                           if isinstance(state_or_rho, hilbert.DensityOperator)
                           else state_or_rho, dtype=np.complex128)
        n = int(round(math.log2(block.shape[0])))
    if qubit_subset is not None:
        qubit_subset = tuple(qubit_subset)
        if len(qubit_subset) > 3:
            raise DomainError("full-matrix export is limited to 3 qubits")
        keep_bits = qubit_subset
        dim = 2 ** len(keep_bits)
        out = np.zeros((dim, dim), dtype=np.complex128)
        traced = [q for q in range(n) if q not in keep_bits]
        for i in range(2 ** n):
            for j in range(2 ** n):
                bi, bj = format(i, f"0{n}b"), format(j, f"0{n}b")
                if any(bi[q] != bj[q] for q in traced):
                    continue
                ki = int("".join(bi[q] for q in keep_bits), 2)
                kj = int("".join(bj[q] for q in keep_bits), 2)
                out[ki, kj] += block[i, j]
        block, n = out, len(keep_bits)
    elif n > 3:
        raise DomainError("full-matrix export is limited to 3 qubits; pass a "
                          "qubit_subset")
    labels = hilbert.computational_labels(n)
    payload = {
        "basis_labels": list(labels),
        "real": block.real,
        "imag": block.imag,
    }
    return _write_json(Path(path), payload)


# ----------------------------------------------------------------------
# derived-parameter echo
# ----------------------------------------------------------------------

def _derived_dict(params: physpar.ScenarioParams) -> dict[str, Any]:
    el, dr, md, cp = params.electron, params.drive, params.mode, params.coupling
    out = {
        "gamma": el.gamma,
        "v0_m_per_s": el.v0_m_per_s,
        "k0_per_m": el.k0_per_m,
        "p0_kg_m_per_s": el.p0_kg_m_per_s,
        "photon_energy_eV": dr.photon_energy_eV,
        "omega_L_rad_per_fs": dr.omega_L_rad_per_fs,
        "wavelength_nm": dr.wavelength_nm,
        "grating_period_nm": dr.grating_period_nm,
        "q_per_nm": dr.q_per_nm,
        "E_z_tilde_V_per_m": md.E_z_tilde_V_per_m,
        "box_volume_m3": md.box_volume_m3,
        "g_rad_per_fs": cp.g_rad_per_fs,
        "g_signed_rad_per_fs": cp.g_signed_rad_per_fs,
        "g_over_omega": cp.g_over_omega,
        "Delta_rad_per_fs": cp.delta_rad_per_fs,
        "Delta_signed_rad_per_fs": cp.delta_signed_rad_per_fs,
        "omega_rec_rad_per_fs": cp.omega_rec_rad_per_fs,
        "dispersion_scale": params.dispersion_scale,
    }
    if cp.J_rad_per_fs is not None:
        out["J_rad_per_fs"] = cp.J_rad_per_fs
        out["J_signed_rad_per_fs"] = cp.J_signed_rad_per_fs
        out["g_over_Delta"] = cp.g_rad_per_fs / cp.delta_rad_per_fs
    return out


def _rms(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sqrt(np.mean((np.asarray(a) - np.asarray(b)) ** 2)))


def _refine_peak(ts: np.ndarray, ys: np.ndarray) -> float:
    """Vertex of the parabola through the sampled maximum and its neighbors."""
    k = int(np.argmax(ys))
    if k == 0 or k == len(ts) - 1:
        return float(ts[k])
    c = np.polyfit(ts[k - 1:k + 2], ys[k - 1:k + 2], 2)
    return float(-c[1] / (2.0 * c[0]))


def _electron_ket(cfg_initial: str, window) -> np.ndarray:
    label = hilbert.E_LABEL if cfg_initial == "e" else hilbert.G_LABEL
    v = np.zeros(len(window), dtype=np.complex128)
    v[list(window).index(label)] = 1.0
    return v


# ----------------------------------------------------------------------
# individual experiments
# ----------------------------------------------------------------------

def _run_params_only(cfg: ScenarioConfig, out: Path, fmt: str) -> ResultRecord:
    params = cfg.to_scenario()
    metrics = {
        "E_half_minus_E_minus_half_eV":
            physpar.sideband_energy(0.5, params)
            - physpar.sideband_energy(-0.5, params),
        "leak_detuning_eV": physpar.transition_detuning(0.5, params),
    }
    return ResultRecord("params_only", dict(cfg.values),
                        _derived_dict(params), metrics)


def _run_smith_purcell(cfg: ScenarioConfig, out: Path, fmt: str) -> ResultRecord:
    params = cfg.to_scenario()
    beta = params.electron.beta
    lam = params.drive.wavelength_nm
    theta = params.drive.incidence_theta_rad
    metrics = {
        "Lambda_classical_nm": physpar.classical_grating_period(lam, beta),
        "Lambda_m1_nm": physpar.quantum_grating_period(lam, theta, beta, 1),
        "Lambda_m2_nm": physpar.quantum_grating_period(lam, theta, beta, 2),
    }
    try:
        physpar.quantum_grating_period(lam, theta, beta, 0)
        metrics["m0_rejected"] = False
    except GratingError as exc:
        metrics["m0_rejected"] = True
        metrics["m0_error"] = str(exc)
    return ResultRecord("smith_purcell", dict(cfg.values),
                        _derived_dict(params), metrics)


def _resonant_gate_run(name: str, cfg: ScenarioConfig, out: Path,
                       fmt: str) -> ResultRecord:
    """fig2a / fig2a_strong: full-model X gate vs the ideal JC dynamics."""
    params = cfg.to_scenario()
    basis = cfg.to_basis()
    alpha = cfg.alpha()
    g = params.coupling.g_rad_per_fs
    theta = cfg.get("gate.theta_rad", math.pi)

    gate_type = cfg.get("gate.type", "rx")
    factory = {"rx": gates.schedule_rx, "ry": gates.schedule_ry,
               "rz": gates.schedule_rz_composite}[gate_type]
    schedule = factory(theta, g, alpha)
    total = schedule.wall_time_fs
    prop = cfg.to_propagator(total)

    window = basis.sideband_indices
    photon = hilbert.coherent_state(alpha, basis.fock_cutoff)
    init_label = cfg.get("gate.initial", "g")
    psi0 = hilbert.tensor_product(
        basis, [_electron_ket(init_label, window), photon])

    # semiclassical 2x2 target in the (e, g) ordering
    q0 = np.array([1.0, 0.0] if init_label == "e" else [0.0, 1.0],
                  dtype=np.complex128)
    target = gates.semiclassical_unitary(schedule) @ q0

    result = gates.execute(schedule, psi0, params, model=ModelKind.PINEM_FULL,
                           ideal_target=target, config=prop)

    # quantized ideal-JC reference on the bare qubit pair
    basis_jc = hilbert.make_basis(1, hilbert.qubit_window(), basis.fock_cutoff)
    psi0_jc = hilbert.tensor_product(
        basis_jc, [_electron_ket(init_label, basis_jc.sideband_indices),
                   photon])
    result_jc = gates.execute(schedule, psi0_jc, params,
                              model=ModelKind.JC_INTERACTION,
                              ideal_target=target, config=prop)

    traj = result.trajectories[-1]
    traj_jc = result_jc.trajectories[-1]
    rms = _rms(traj.computational_populations()[:, 0, :],
               traj_jc.computational_populations()[:, 0, :])

    metrics = {
        "duration_fs": total,
        "fidelity": result.fidelity,
        "entropy_nats": result.entropy_nats,
        "entropy_over_ln2": result.entropy_over_ln2,
        "leakage_final": result.leakage,
        "leakage_max": float(np.max(traj.leakage())),
        "rms_vs_ideal_jc": rms,
        "ideal_jc_fidelity": result_jc.fidelity,
        "photon_mean_final": float(traj.photon_mean[-1]),
    }
    if gate_type == "rx" and abs(theta - math.pi) < 1e-12:
        metrics["T_pi_fs"] = total
    record = ResultRecord(name, dict(cfg.values), _derived_dict(params), metrics)
    if fmt in ("csv", "both"):
        record.files.append(_write_trajectory_csv(
            out / f"{name}_pinem_trajectory.csv", traj))
        record.files.append(_write_trajectory_csv(
            out / f"{name}_ideal_jc_trajectory.csv", traj_jc))
    if fmt in ("json", "both"):
        series = _plot_series(traj, "PINEM") + _plot_series(traj_jc, "JC")
        record.files.append(_write_plotdata(
            out / f"{name}_plotdata.json", traj.times_fs, series,
            f"{name}: resonant X gate populations"))
    return record


def _xy_ideal_states(params, qubit_factors: list[np.ndarray], plan
                     ) -> list[np.ndarray]:
    """Exact dispersive-XY register states after each gate of the plan.

    qubit_factors are window-ordered (g, e) two-vectors; the returned target
    vectors are reordered to the (e, g) gate convention.
    """
    n_qubits = len(qubit_factors)
    basis_xy = hilbert.make_basis(n_qubits, hilbert.qubit_window(), 0)
    state = hilbert.tensor_product(basis_xy, [*qubit_factors,
                                              hilbert.fock_ket(0, 0)])
    out = []
    for (pair, angle) in plan:
        h_xy = hamiltonian.build_model(ModelKind.DISPERSIVE_XY, params,
                                       basis_xy, active=pair)
        duration = angle / params.coupling.J_rad_per_fs
        state = propagate_eigen(h_xy, state, duration)
        out.append(hilbert.computational_state_vector(state))
    return out


def _register_initial(basis, thetas: dict[int, float]) -> StateVector:
    # unspecified qubits idle in |g> (theta = pi in the cos/sin convention)
    factors = [hilbert.qubit_factor(thetas.get(q, math.pi),
                                    basis.sideband_indices)
               for q in range(basis.num_electrons)]
    factors.append(hilbert.fock_ket(0, basis.fock_cutoff))
    return hilbert.tensor_product(basis, factors)


def _initial_thetas(cfg: ScenarioConfig) -> dict[int, float]:
    thetas = {}
    for key, value in cfg.values.items():
        if key.startswith("initial.theta_"):
            k = int(key.split("_")[1])
            thetas[k - 1] = float(value)
    return thetas


def _run_fig2b(cfg: ScenarioConfig, out: Path, fmt: str) -> ResultRecord:
    params = cfg.to_scenario()
    basis = cfg.to_basis()
    cp = params.coupling
    if cp.J_rad_per_fs is None:
        raise ConfigError("fig2b needs a detuned drive")
    schedule = gates.schedule_iswap(cp.delta_rad_per_fs, cp.g_rad_per_fs,
                                    delta_signed=cp.delta_signed_rad_per_fs)
    total = schedule.wall_time_fs
    prop = cfg.to_propagator(total)

    thetas = _initial_thetas(cfg)
    psi0 = _register_initial(basis, thetas)
    qfactors = [hilbert.qubit_factor(thetas.get(q, math.pi)) for q in range(2)]
    ideal = _xy_ideal_states(params, qfactors, [((0, 1), math.pi / 2)])[-1]

    result = gates.execute(schedule, psi0, params, ideal_target=ideal,
                           config=prop)

    # transfer-peak probe: |eg>, vacuum photon; population of qubit 2 on e
    probe0 = hilbert.tensor_product(
        basis, [_electron_ket("e", basis.sideband_indices),
                _electron_ket("g", basis.sideband_indices),
                hilbert.fock_ket(0, basis.fock_cutoff)])
    h_tc = hamiltonian.build_model(ModelKind.TC_LAB, params, basis)
    probe_prop = PropagatorConfig(
        method=prop.method, sample_every_fs=1.2 * total / 600,
        norm_tol=prop.norm_tol)
    probe = propagate_state(h_tc, probe0, 1.2 * total, probe_prop)
    e_col = list(basis.sideband_indices).index(hilbert.E_LABEL)
    p2e = probe.populations[:, 1, e_col]
    peak = _refine_peak(probe.times_fs, p2e)

    metrics = {
        "T_iswap_fs": total,
        "fidelity_post_virtual_z": result.fidelity,
        "virtual_z_phase_rad": schedule.virtual_z_log.get(0, 0.0),
        "transfer_peak_fs": peak,
        "transfer_peak_rel_dev": abs(peak - total) / total,
        "entropy_nats": result.entropy_nats,
        "leakage_final": result.leakage,
        "photon_mean_final": float(result.trajectories[-1].photon_mean[-1]),
    }
    record = ResultRecord("fig2b", dict(cfg.values), _derived_dict(params),
                          metrics)
    traj = result.trajectories[-1]
    if fmt in ("csv", "both"):
        record.files.append(_write_trajectory_csv(
            out / "fig2b_trajectory.csv", traj))
        record.files.append(_write_trajectory_csv(
            out / "fig2b_probe_trajectory.csv", probe))
    if fmt in ("json", "both"):
        record.files.append(_write_plotdata(
            out / "fig2b_plotdata.json", traj.times_fs,
            _plot_series(traj, "TC"), "fig2b: dispersive iSWAP populations"))
    return record


def _run_fig3(cfg: ScenarioConfig, out: Path, fmt: str) -> ResultRecord:
    params = cfg.to_scenario()
    basis = cfg.to_basis()
    cp = params.coupling
    n_q = cfg.get("wstate.n", 3)
    convention = cfg.get("wstate.convention", "arccos")
    plan = gates.wstate_digital_sequence(n_q, convention)
    segs = []
    for pair, angle in plan:
        segs.extend(gates.schedule_partial_iswap(
            angle, cp.delta_rad_per_fs, cp.g_rad_per_fs,
            delta_signed=cp.delta_signed_rad_per_fs, active=pair).segments)

    # |eg...g>: excitation enters on qubit 1
    qfactors = [hilbert.qubit_factor(0.0 if q == 0 else math.pi)
                for q in range(n_q)]
    ideal_states = _xy_ideal_states(params, qfactors, plan)

    factors = [_electron_ket("e" if q == 0 else "g", basis.sideband_indices)
               for q in range(n_q)]
    factors.append(hilbert.fock_ket(0, basis.fock_cutoff))
    psi0 = hilbert.tensor_product(basis, factors)

    metrics: dict[str, Any] = {"convention": convention}
    durations = [seg.duration_fs for seg in segs]
    for k, d in enumerate(durations, start=1):
        metrics[f"T_theta{k}_fs"] = d
    metrics["T_total_fs"] = float(sum(durations))

    record = ResultRecord("fig3", dict(cfg.values), _derived_dict(params),
                          metrics)
    prop = cfg.to_propagator(sum(durations))
    final_result = None
    for k in range(1, len(segs) + 1):
        sched_k = gates.GateSchedule(segments=tuple(segs[:k]))
        res = gates.execute(sched_k, psi0, params,
                            ideal_target=ideal_states[k - 1], config=prop)
        metrics[f"fidelity_step{k}"] = res.fidelity
        rho_path = out / f"fig3_rho_step{k}.json"
        record.files.append(export_density_matrix(
            res.reduced_qubits, rho_path))
        final_result = res

    # readout frame correction on qubit 2 clears the geg-vs-egg phase
    corrected = gates.apply_virtual_z(final_result.final_state,
                                      {1: math.pi / 4})
    rho_c = hilbert.computational_block(
        hilbert.partial_trace(corrected, keep="electrons"), basis)
    diag = np.real(np.diag(rho_c))
    labels = hilbert.computational_labels(n_q)
    single_exc = [i for i, lab in enumerate(labels) if lab.count("e") == 1]
    metrics["diag_populations"] = {labels[i]: float(diag[i])
                                   for i in single_exc}
    metrics["virtual_rz_on_qubit2_rad"] = math.pi / 2
    metrics["leakage_final"] = final_result.leakage
    record.files.append(export_density_matrix(
        hilbert.DensityOperator(rho_c), out / "fig3_rho_corrected.json"))

    if fmt in ("csv", "both") and final_result.trajectories:
        for j, traj in enumerate(final_result.trajectories, start=1):
            record.files.append(_write_trajectory_csv(
                out / f"fig3_gate{j}_trajectory.csv", traj))
    if fmt in ("json", "both") and final_result.trajectories:
        traj = final_result.trajectories[0]
        record.files.append(_write_plotdata(
            out / "fig3_plotdata.json", traj.times_fs,
            _plot_series(traj, "gate1"), "fig3: W-state preparation, gate 1"))
    return record


def _run_collapse_revival(name: str, cfg: ScenarioConfig, out: Path,
                          fmt: str) -> ResultRecord:
    """s1_bragg / s2_ramannath: full model vs ideal JC vs the exact series."""
    params = cfg.to_scenario()
    basis = cfg.to_basis()
    alpha = cfg.alpha()
    g = params.coupling.g_rad_per_fs
    total = cfg.get("run.total_time_fs")
    if total is None:
        raise ConfigError("run.total_time_fs is required for this experiment")
    prop = cfg.to_propagator(total)
    init_label = cfg.get("gate.initial", "e")

    photon = hilbert.coherent_state(alpha, basis.fock_cutoff)
    psi0 = hilbert.tensor_product(
        basis, [_electron_ket(init_label, basis.sideband_indices), photon])
    h_full = hamiltonian.build_model(ModelKind.PINEM_FULL, params, basis)
    traj = propagate_state(h_full, psi0, total, prop)

    basis_jc = hilbert.make_basis(1, hilbert.qubit_window(), basis.fock_cutoff)
    psi0_jc = hilbert.tensor_product(
        basis_jc, [_electron_ket(init_label, basis_jc.sideband_indices),
                   photon])
    h_jc = hamiltonian.build_model(ModelKind.JC_INTERACTION, params, basis_jc)
    traj_jc = propagate_state(h_jc, psi0_jc, total, prop)

    series = analytics.pe_exact_sum(alpha, g, traj.times_fs,
                                    initial=init_label)
    e_col_jc = list(basis_jc.sideband_indices).index(hilbert.E_LABEL)
    pe_jc = traj_jc.populations[:, 0, e_col_jc]
    rms_series = _rms(series, pe_jc)
    rms_full = _rms(traj.computational_populations()[:, 0, :],
                    traj_jc.computational_populations()[:, 0, :])

    pred = analytics.collapse_revival_times(alpha, g)
    window = np.linspace(0.75 * pred.t_rev_fs, 1.25 * pred.t_rev_fs, 1200)
    revival = analytics.pe_exact_sum(alpha, g, window, initial=init_label)
    leak = traj.leakage()
    above = np.nonzero(leak > 0.01)[0]

    metrics = {
        "g_rad_per_fs": g,
        "t_coll_gaussian_fs": pred.t_coll_gaussian_fs,
        "t_c_adjacent_fs": pred.t_c_adjacent_fs,
        "t_rev_fs": pred.t_rev_fs,
        "rms_series_vs_jc": rms_series,
        "rms_full_vs_jc": rms_full,
        "revival_peak_to_peak": float(revival.max() - revival.min()),
        "leakage_max": float(leak.max()),
        "leakage_first_above_1pc_fs":
            float(traj.times_fs[above[0]]) if above.size else None,
        "regime": analytics.classify_regime(params, alpha).regime,
    }
    record = ResultRecord(name, dict(cfg.values), _derived_dict(params),
                          metrics)
    if fmt in ("csv", "both"):
        record.files.append(_write_trajectory_csv(
            out / f"{name}_pinem_trajectory.csv", traj))
        record.files.append(_write_trajectory_csv(
            out / f"{name}_ideal_jc_trajectory.csv", traj_jc))
    if fmt in ("json", "both"):
        series_plots = _plot_series(traj, "PINEM")
        series_plots.append({"label": "exact series P_e", "values": series})
        record.files.append(_write_plotdata(
            out / f"{name}_plotdata.json", traj.times_fs, series_plots,
            f"{name}: collapse and revival"))
    return record


def run_wstate(n_qubits: int, mode: str, overrides: dict[str, Any] | None = None,
               out_dir=".", fmt: str = "both", sets: list[str] | None = None,
               config_text: str | None = None) -> ResultRecord:
    """Analog (resonant TC) or digital (partial-iSWAP) W-state preparation."""
    out = Path(out_dir)
    if mode == "digital":
        preset = dict(PRESETS["fig3"])
        preset["wstate.n"] = n_qubits
        preset["basis.num_electrons"] = n_qubits
        if overrides:
            preset.update(overrides)
        cfg = ScenarioConfig.from_sources(preset=preset, file_text=config_text,
                                          sets=sets)
        return _run_fig3(cfg, out, fmt)

    if mode != "analog":
        raise ConfigError(f"wstate mode must be digital or analog, not {mode!r}")
    preset = dict(WSTATE_ANALOG_BASE)
    preset["wstate.n"] = n_qubits
    preset["basis.num_electrons"] = n_qubits
    if overrides:
        preset.update(overrides)
    cfg = ScenarioConfig.from_sources(preset=preset, file_text=config_text,
                                      sets=sets)
    params = cfg.to_scenario()
    basis = cfg.to_basis()
    g = params.coupling.g_rad_per_fs
    schedule = gates.wstate_tc_analog(n_qubits, g)
    total = schedule.wall_time_fs
    prop = cfg.to_propagator(total)

    factors = [_electron_ket("g", basis.sideband_indices)
               for _ in range(n_qubits)]
    factors.append(hilbert.fock_ket(1, basis.fock_cutoff))
    psi0 = hilbert.tensor_product(basis, factors)

    w_target = np.zeros(2 ** n_qubits, dtype=np.complex128)
    labels = hilbert.computational_labels(n_qubits)
    for i, lab in enumerate(labels):
        if lab.count("e") == 1:
            w_target[i] = 1.0 / math.sqrt(n_qubits)

    result = gates.execute(schedule, psi0, params, ideal_target=w_target,
                           config=prop)
    traj = result.trajectories[-1]
    metrics = {
        "T_TC_fs": total,
        "fidelity_w": result.fidelity,
        "photon_mean_final": float(traj.photon_mean[-1]),
        "entropy_nats": result.entropy_nats,
    }
    record = ResultRecord("wstate_analog", dict(cfg.values),
                          _derived_dict(params), metrics)
    if fmt in ("csv", "both"):
        record.files.append(_write_trajectory_csv(
            out / "wstate_analog_trajectory.csv", traj))
    if fmt in ("json", "both"):
        record.files.append(_write_plotdata(
            out / "wstate_analog_plotdata.json", traj.times_fs,
            _plot_series(traj, "TC"), "analog W state via resonant TC"))
    record.files.append(_write_json(Path(out_dir) / "wstate_analog_summary.json",
                                    record.to_dict()))
    return record


def run_gate(gate_type: str, theta: float | None = None,
             overrides: dict[str, Any] | None = None, out_dir=".",
             fmt: str = "both", sets: list[str] | None = None,
             config_text: str | None = None) -> ResultRecord:
    """Run a single named gate on the matching preset scenario."""
    out = Path(out_dir)
    if gate_type in ("rx", "ry", "rz"):
        preset = dict(PRESETS["fig2a"])
        preset["gate.type"] = gate_type
        if theta is not None:
            preset["gate.theta_rad"] = theta
        if overrides:
            preset.update(overrides)
        cfg = ScenarioConfig.from_sources(preset=preset, file_text=config_text,
                                          sets=sets)
        record = _resonant_gate_run(f"gate_{gate_type}", cfg, out, fmt)
    elif gate_type in ("iswap", "partial_iswap"):
        preset = dict(PRESETS["fig2b"])
        preset["gate.type"] = gate_type
        if gate_type == "partial_iswap":
            preset["gate.theta_rad"] = theta if theta is not None else math.pi / 4
        if overrides:
            preset.update(overrides)
        cfg = ScenarioConfig.from_sources(preset=preset, file_text=config_text,
                                          sets=sets)
        record = _run_fig2b_like_gate(cfg, gate_type, out, fmt)
    else:
        raise ConfigError(f"unknown gate type {gate_type!r}")
    record.files.append(_write_json(out / f"gate_{gate_type}_summary.json",
                                    record.to_dict()))
    return record


def _run_fig2b_like_gate(cfg: ScenarioConfig, gate_type: str, out: Path,
                         fmt: str) -> ResultRecord:
    params = cfg.to_scenario()
    basis = cfg.to_basis()
    cp = params.coupling
    if gate_type == "iswap":
        schedule = gates.schedule_iswap(cp.delta_rad_per_fs, cp.g_rad_per_fs,
                                        delta_signed=cp.delta_signed_rad_per_fs)
        angle = math.pi / 2
    else:
        angle = cfg.get("gate.theta_rad", math.pi / 4)
        schedule = gates.schedule_partial_iswap(
            angle, cp.delta_rad_per_fs, cp.g_rad_per_fs,
            delta_signed=cp.delta_signed_rad_per_fs)
    prop = cfg.to_propagator(schedule.wall_time_fs)
    thetas = _initial_thetas(cfg)
    psi0 = _register_initial(basis, thetas)
    qfactors = [hilbert.qubit_factor(thetas.get(q, math.pi)) for q in range(2)]
    ideal = _xy_ideal_states(params, qfactors, [((0, 1), angle)])[-1]
    result = gates.execute(schedule, psi0, params, ideal_target=ideal,
                           config=prop)
    metrics = {
        "duration_fs": schedule.wall_time_fs,
        "rotation_angle_rad": angle,
        "fidelity": result.fidelity,
        "leakage_final": result.leakage,
        "entropy_nats": result.entropy_nats,
    }
    record = ResultRecord(f"gate_{gate_type}", dict(cfg.values),
                          _derived_dict(params), metrics)
    if fmt in ("csv", "both") and result.trajectories:
        record.files.append(_write_trajectory_csv(
            out / f"gate_{gate_type}_trajectory.csv", result.trajectories[-1]))
    return record


_RUNNERS = {
    "params_only": _run_params_only,
    "smith_purcell": _run_smith_purcell,
    "fig2a": lambda cfg, out, fmt: _resonant_gate_run("fig2a", cfg, out, fmt),
    "fig2a_strong": lambda cfg, out, fmt: _resonant_gate_run("fig2a_strong",
                                                             cfg, out, fmt),
    "fig2b": _run_fig2b,
    "fig3": _run_fig3,
    "s1_bragg": lambda cfg, out, fmt: _run_collapse_revival("s1_bragg", cfg,
                                                            out, fmt),
    "s2_ramannath": lambda cfg, out, fmt: _run_collapse_revival("s2_ramannath",
                                                                cfg, out, fmt),
}


def run_experiment(name: str, overrides: dict[str, Any] | None = None,
                   out_dir=".", fmt: str = "both",
                   config_text: str | None = None,
                   sets: list[str] | None = None) -> ResultRecord:
    """Run a named preset experiment and write its result files."""
    if name not in _RUNNERS:
        raise ConfigError(f"unknown experiment {name!r}; available: "
                          f"{', '.join(sorted(_RUNNERS))}")
    if fmt not in ("csv", "json", "both"):
        raise ConfigError(f"format must be csv, json, or both, not {fmt!r}")
    preset = dict(PRESETS[name])
    if overrides:
        preset.update(overrides)
    cfg = ScenarioConfig.from_sources(preset=preset, file_text=config_text,
                                      sets=sets)
    out = Path(out_dir)
    record = _RUNNERS[name](cfg, out, fmt)
    record.files.append(_write_json(out / f"{name}_summary.json",
                                    record.to_dict()))
    return record
