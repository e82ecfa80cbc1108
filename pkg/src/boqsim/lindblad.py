"""Brute-force oracle: truncated-Fock Lindblad steady states and Liouvillian
eigenvalues for the pumped oscillator alone and the joint transmon-oscillator
system.

The joint Hamiltonian is assembled in the bare (lab-rotating-frame) basis,
not the squeezing frame, so agreement with the perturbative results of the
other modules is a genuine independent check.  Superoperators use the
column-stacking convention: vec(rho) stacks columns (Fortran order), and
vec(A X B) = kron(B.T, A) vec(X).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import expm

from .core import DriveSpec, OscillatorParams, TransmonParams, validate
from .spectral import resonant_steady_state


class UnstableDynamics(RuntimeError):
    """The Liouvillian has no unique decaying steady state."""


class TruncationError(ValueError):
    """Fock truncation too small for the requested parameters."""


class AmbiguousSector(RuntimeError):
    """Two Liouvillian eigenvalues overlap the target sector comparably."""


@dataclass(frozen=True)
class LindbladConfig:
    """Truncation and solver settings for the oracle."""

    n_fock: int = 16
    n_transmon: int = 1  # 1 (oscillator only), 2 or 3 transmon levels
    solve_tol: float = 1e-9
    convergence_factor: float = 1e-6

    def __post_init__(self):
        if self.n_fock < 4:
            raise ValueError("n_fock must be >= 4")
        if self.n_transmon not in (1, 2, 3):
            raise ValueError("n_transmon must be 1, 2 or 3")
        if not (0.0 < self.solve_tol <= 1e-6):
            raise ValueError("solve_tol must be in (0, 1e-6]")


def estimate_occupation(p: OscillatorParams, drive: DriveSpec | None) -> float:
    """Rough steady-state photon number used to size the Fock truncation."""
    n_d = drive.n_d if drive is not None else 0.0
    if p.lam < abs(p.delta_a):
        if p.delta_a == 0.0:
            return n_d
        tanh2r = p.lam / abs(p.delta_a)
        r = 0.5 * math.atanh(tanh2r)
        return math.sinh(r) ** 2 + n_d * math.cosh(r) ** 2
    if p.delta_a == 0.0 and p.lam < p.kappa / 2.0:
        return resonant_steady_state(p).n_mean + n_d
    return float("inf")


def default_n_fock(p: OscillatorParams, drive: DriveSpec | None = None) -> int:
    """Truncation sized to the slow Fock-space tails of squeezed states.

    Squeezed states decay slowly in the number basis, so the truncation must
    track the anti-squeezed quadrature variance (proportional to e^{2r}, or
    to S_inf in the resonant regime), not just the mean occupation.
    """
    occ = estimate_occupation(p, drive)
    if not math.isfinite(occ):
        raise UnstableDynamics("cannot size truncation for unstable dynamics")
    if p.delta_a == 0.0:
        s_inf = (p.kappa / 2.0) / (p.kappa / 2.0 - p.lam) if p.lam else 1.0
        anti = s_inf
    else:
        r = 0.5 * math.atanh(p.lam / abs(p.delta_a))
        anti = math.exp(2.0 * r)
    return max(16, math.ceil(12.0 * anti + 10.0 * occ + 10.0))


def destroy(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1)


def transmon_level_detunings(q: TransmonParams, n_levels: int) -> np.ndarray:
    """delta_k = k delta_q + k(k-1)/2 chi_q (rotating frame at nu_p/2)."""
    k = np.arange(n_levels, dtype=float)
    return k * q.delta_q + 0.5 * k * (k - 1.0) * q.chi_q


@dataclass
class LiouvillianMatrix:
    """Assembled superoperator plus the context needed to rebuild it."""

    matrix: sp.csc_matrix
    n_fock: int
    n_transmon: int
    a_full: np.ndarray
    sigma_minus_full: np.ndarray | None
    params: OscillatorParams
    transmon: TransmonParams | None
    drive: DriveSpec | None
    cfg: LindbladConfig

    @property
    def dim(self) -> int:
        return self.n_fock * self.n_transmon


def _hamiltonian(p: OscillatorParams, q: TransmonParams | None,
                 drive: DriveSpec | None, n_fock: int, n_transmon: int
                 ) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Joint Hamiltonian in the bare basis; returns (H, a_full, b_low_full)."""
    a = destroy(n_fock)
    ident_f = np.eye(n_fock)
    h_osc = (p.delta_a * a.conj().T @ a
             - 0.5 * p.lam * (a @ a + a.conj().T @ a.conj().T))
    if drive is not None and drive.n_d > 0.0:
        if drive.detuning_d != 0.0:
            raise ValueError("oracle drive must sit at nu_p/2 "
                             "(detuning_d = 0); detuned drives are not "
                             "time-independent in this frame")
        eps = p.kappa * math.sqrt(drive.n_d) * np.exp(
            1j * (drive.theta - math.pi / 4.0))
        h_osc = h_osc + 0.5 * eps * a + 0.5 * np.conj(eps) * a.conj().T
    if q is None or n_transmon == 1:
        return h_osc, a, None
    ident_t = np.eye(n_transmon)
    h_t = np.diag(transmon_level_detunings(q, n_transmon))
    b = destroy(n_transmon)  # lowering with sqrt(k+1) matrix elements
    h = (np.kron(ident_t, h_osc) + np.kron(h_t, ident_f)
         + q.g * (np.kron(b.conj().T, a) + np.kron(b, a.conj().T)))
    return h, np.kron(ident_t, a), np.kron(b, ident_f)


def _dissipator(c: np.ndarray) -> sp.csc_matrix:
    c = sp.csc_matrix(c)
    cd_c = (c.conj().T @ c).tocsc()
    ident = sp.identity(c.shape[0], format="csc")
    return (sp.kron(c.conj(), c)
            - 0.5 * sp.kron(ident, cd_c)
            - 0.5 * sp.kron(cd_c.T, ident)).tocsc()


def build_liouvillian(p: OscillatorParams, q: TransmonParams | None = None,
                      drive: DriveSpec | None = None,
                      cfg: LindbladConfig | None = None) -> LiouvillianMatrix:
    """Assemble the Lindblad superoperator in the truncated product space.

    H = delta_a a^dag a - (lam/2)(a^2 + a^dag^2) [+ transmon levels +
    g sqrt(k+1) exchange] [+ (eps_d/2) a + h.c.]; dissipators sqrt(kappa) a,
    sqrt(gamma_1) (lowering), sqrt(gamma_phi/2) sigma_z (generalized to a
    diagonal level-number operator beyond two levels).
    """
    if cfg is None:
        cfg = LindbladConfig(n_fock=default_n_fock(p, drive),
                             n_transmon=1 if q is None else min(q.n_levels, 3))
    n_transmon = cfg.n_transmon if q is not None else 1
    occ = estimate_occupation(p, drive)
    if not math.isfinite(occ):
        rep = validate(p)
        raise UnstableDynamics(
            f"lam = {p.lam} >= lambda_crit = {rep.lambda_crit}")
    if occ > cfg.n_fock / 4.0:
        raise TruncationError(
            f"estimated occupation {occ:.3g} exceeds n_fock/4 = "
            f"{cfg.n_fock / 4:.3g}; increase n_fock to at least "
            f"{default_n_fock(p, drive)}")
    h, a_full, b_low = _hamiltonian(p, q, drive, cfg.n_fock, n_transmon)
    dim = h.shape[0]
    ident = sp.identity(dim, format="csc")
    h_s = sp.csc_matrix(h)
    liou = (-1j * (sp.kron(ident, h_s) - sp.kron(h_s.T, ident))).tocsc()
    liou = liou + p.kappa * _dissipator(a_full)
    sigma_minus = None
    if q is not None and n_transmon >= 2:
        sigma_minus = b_low
        if q.gamma_1 > 0.0:
            liou = liou + q.gamma_1 * _dissipator(b_low)
        if q.gamma_phi > 0.0:
            # sqrt(2 gamma_phi) * diag(level number); equals
            # sqrt(gamma_phi/2) sigma_z for two levels up to an identity shift
            num_t = np.diag(np.arange(n_transmon, dtype=float))
            num_full = np.kron(num_t, np.eye(cfg.n_fock))
            liou = liou + 2.0 * q.gamma_phi * _dissipator(num_full)
    return LiouvillianMatrix(matrix=liou, n_fock=cfg.n_fock,
                             n_transmon=n_transmon, a_full=a_full,
                             sigma_minus_full=sigma_minus, params=p,
                             transmon=q, drive=drive, cfg=cfg)


@dataclass
class SteadyStateResult:
    """Steady-state density matrix moments from the oracle."""

    n_mean: float
    a_sq: complex
    thetas: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray
    trace_residual: float
    min_eigenvalue: float
    truncation_converged: bool
    n_fock: int
    rho: np.ndarray | None = None
    cfg: LindbladConfig | None = None

    def bogoliubov_occupation(self, r: float) -> float:
        """<alpha^dag alpha> from bare moments via the squeezing transform."""
        ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
        chsh = math.cosh(r) * math.sinh(r)
        return (ch2 * self.n_mean + sh2 * (self.n_mean + 1.0)
                - 2.0 * chsh * self.a_sq.real)

    def to_json(self) -> str:
        payload = {
            "n_mean": self.n_mean,
            "a_sq": [self.a_sq.real, self.a_sq.imag],
            "thetas": list(map(float, self.thetas)),
            "var_x": list(map(float, self.var_x)),
            "var_p": list(map(float, self.var_p)),
            "trace_residual": self.trace_residual,
            "min_eigenvalue": self.min_eigenvalue,
            "truncation_converged": self.truncation_converged,
            "n_fock": self.n_fock,
            "cfg": asdict(self.cfg) if self.cfg else None,
        }
        return json.dumps(payload, indent=2)


def _solve_steady_rho(liou: LiouvillianMatrix) -> np.ndarray:
    dim = liou.dim
    mat = liou.matrix.tolil(copy=True)
    # replace the first equation by the unit-trace condition
    trace_row = np.zeros(dim * dim)
    trace_row[np.arange(dim) * (dim + 1)] = 1.0
    mat[0, :] = trace_row
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    vec = spla.spsolve(mat.tocsc(), rhs)
    rho = vec.reshape((dim, dim), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    residual = np.linalg.norm(liou.matrix @ rho.reshape(-1, order="F"))
    if not np.isfinite(residual) or residual > 1e-6 * max(
            1.0, spla.norm(liou.matrix)):
        raise UnstableDynamics("steady-state solve failed to converge "
                               "(dynamics likely unstable)")
    return rho


def _moments(rho: np.ndarray, a_full: np.ndarray,
             thetas: np.ndarray) -> tuple[float, complex, np.ndarray,
                                          np.ndarray]:
    ad = a_full.conj().T
    n_mean = float(np.real(np.trace(rho @ (ad @ a_full))))
    a_sq = complex(np.trace(rho @ (a_full @ a_full)))
    var_x = np.empty(len(thetas))
    var_p = np.empty(len(thetas))
    for i, th in enumerate(thetas):
        x = 0.5 * (a_full * np.exp(-1j * th) + ad * np.exp(1j * th))
        pq = (a_full * np.exp(-1j * th) - ad * np.exp(1j * th)) / 2j
        var_x[i] = float(np.real(np.trace(rho @ (x @ x))))
        var_p[i] = float(np.real(np.trace(rho @ (pq @ pq))))
    return n_mean, a_sq, var_x, var_p


def steady_state(liou: LiouvillianMatrix, thetas=None,
                 check_convergence: bool = True,
                 keep_rho: bool = False) -> SteadyStateResult:
    """Solve L rho = 0 with the unit-trace constraint and report moments.

    When check_convergence is set the solve is repeated at twice the Fock
    truncation; truncation_converged records whether the moments moved by
    less than cfg.convergence_factor (relative).
    """
    rep = validate(liou.params)
    if not rep.stable:
        raise UnstableDynamics(
            f"lam = {liou.params.lam} >= lambda_crit = {rep.lambda_crit}")
    if thetas is None:
        thetas = np.linspace(0.0, math.pi, 9)
    thetas = np.asarray(thetas, dtype=float)
    rho = _solve_steady_rho(liou)
    n_mean, a_sq, var_x, var_p = _moments(rho, liou.a_full, thetas)
    trace_residual = abs(np.trace(rho).real - 1.0)
    min_eig = float(np.linalg.eigvalsh(rho).min())
    converged = True
    if check_convergence:
        cfg2 = LindbladConfig(n_fock=2 * liou.n_fock,
                              n_transmon=liou.cfg.n_transmon,
                              solve_tol=liou.cfg.solve_tol,
                              convergence_factor=liou.cfg.convergence_factor)
        liou2 = build_liouvillian(liou.params, liou.transmon, liou.drive,
                                  cfg2)
        rho2 = _solve_steady_rho(liou2)
        n2, a2, vx2, vp2 = _moments(rho2, liou2.a_full, thetas)
        scale = max(abs(n_mean), abs(a_sq), 0.25)
        moves = [abs(n2 - n_mean), abs(a2 - a_sq),
                 float(np.max(np.abs(vx2 - var_x))),
                 float(np.max(np.abs(vp2 - var_p)))]
        converged = max(moves) / scale < liou.cfg.convergence_factor
    return SteadyStateResult(
        n_mean=n_mean, a_sq=a_sq, thetas=thetas, var_x=var_x, var_p=var_p,
        trace_residual=trace_residual, min_eigenvalue=min_eig,
        truncation_converged=converged, n_fock=liou.n_fock,
        rho=rho if keep_rho else None, cfg=liou.cfg)


def _coherence_eigenvalue(liou: LiouvillianMatrix, rho_ss: np.ndarray,
                          sigma_guess: complex, k: int = 10) -> complex:
    """Liouvillian eigenvalue whose mode has maximal overlap with
    rho_ss @ sigma_minus, i.e. the |g><e| qubit-coherence sector: with the
    qubit near |g>, |g><g| . |g><e| = |g><e| tensored with the oscillator
    steady profile."""
    if liou.sigma_minus_full is None:
        raise ValueError("no qubit in this Liouvillian")
    target = (rho_ss @ liou.sigma_minus_full).reshape(-1, order="F")
    target = target / np.linalg.norm(target)
    k = min(k, liou.matrix.shape[0] - 2)
    vals, vecs = spla.eigs(liou.matrix, k=k, sigma=sigma_guess,
                           v0=target.astype(complex))
    overlaps = np.abs(vecs.conj().T @ target) / np.linalg.norm(vecs, axis=0)
    order = np.argsort(overlaps)[::-1]
    best, second = order[0], order[1]
    if overlaps[second] > 0.9 * overlaps[best]:
        raise AmbiguousSector(
            f"two candidate eigenvalues with comparable overlap: "
            f"{vals[best]:.6g} (|ov|={overlaps[best]:.3f}) and "
            f"{vals[second]:.6g} (|ov|={overlaps[second]:.3f})")
    return complex(vals[best])


@dataclass(frozen=True)
class OracleShift:
    """Oracle qubit shift/dephasing, referenced to the pump-off run."""

    d_omega_q: float
    d_gamma_phi: float
    eig_on: complex
    eig_off: complex

    def to_json(self) -> str:
        return json.dumps({
            "d_omega_q": self.d_omega_q,
            "d_gamma_phi": self.d_gamma_phi,
            "eig_on": [self.eig_on.real, self.eig_on.imag],
            "eig_off": [self.eig_off.real, self.eig_off.imag],
        }, indent=2)


def qubit_shift_dephasing(p: OscillatorParams, q: TransmonParams,
                          cfg: LindbladConfig,
                          drive: DriveSpec | None = None) -> OracleShift:
    """Qubit frequency shift and induced dephasing from the coherence-sector
    Liouvillian eigenvalue, referenced to an identical pump-off run.

    The |g><e| coherence evolves at +i delta_q under the bare Hamiltonian, so
    the dressed qubit frequency is Im(eig) and its linewidth is -Re(eig);
    both are reported as pump-on minus pump-off differences.
    """
    p_off = OscillatorParams(freq_a=p.freq_a, kappa=p.kappa,
                             delta_a=p.delta_a, lam=0.0)
    eigs_found = {}
    for label, params in (("off", p_off), ("on", p)):
        liou = build_liouvillian(params, q, drive, cfg)
        res = steady_state(liou, check_convergence=False, keep_rho=True)
        sigma_guess = 1j * q.delta_q - 0.5 * q.gamma_t - 0.25 * p.kappa
        eigs_found[label] = _coherence_eigenvalue(liou, res.rho, sigma_guess)
    d_omega = eigs_found["on"].imag - eigs_found["off"].imag
    d_gamma = -(eigs_found["on"].real - eigs_found["off"].real)
    return OracleShift(d_omega_q=d_omega, d_gamma_phi=d_gamma,
                       eig_on=eigs_found["on"], eig_off=eigs_found["off"])


def _squeezed_fock_states(r_signed: float, n_fock: int,
                          n_states: int) -> np.ndarray:
    """Columns are |n_s> = U_s^dag |n> with U_s = exp(r/2 (a^2 - a^dag^2))."""
    a = destroy(n_fock)
    gen = 0.5 * r_signed * (a @ a - a.conj().T @ a.conj().T)
    u_dag = expm(gen).conj().T
    return u_dag[:, :n_states]


def chi_exact(p: OscillatorParams, q: TransmonParams,
              cfg: LindbladConfig) -> float:
    """Dispersive strength from exact diagonalization of the joint
    Hamiltonian in the bare frame: the qubit-frequency shift per Bogoliubov
    excitation, chi = (E_e1 - E_e0) - (E_g1 - E_g0).

    Eigenstates are identified by maximal overlap with the squeezed-Fock
    product states.  This is the Hamiltonian (zero-dissipation) sector of the
    Liouvillian spectrum; with kappa ~ the level spacings the dissipative
    coherence modes hybridize and a per-excitation reading is ill-defined.
    """
    if p.delta_a == 0.0 or p.lam >= abs(p.delta_a):
        raise ValueError("chi_exact requires the detuned regime "
                         "lam < |delta_a|")
    n_transmon = min(q.n_levels, 3) if cfg.n_transmon == 1 else cfg.n_transmon
    h, _, _ = _hamiltonian(p, q, None, cfg.n_fock, n_transmon)
    evals, evecs = np.linalg.eigh(h)
    r = 0.5 * math.atanh(p.lam / abs(p.delta_a))
    r_signed = r if p.delta_a > 0 else -r
    sq = _squeezed_fock_states(r_signed, cfg.n_fock, 2)
    energies = {}
    for k_level in (0, 1):  # g, e
        for n_exc in (0, 1):
            target = np.zeros(n_transmon * cfg.n_fock, dtype=complex)
            start = k_level * cfg.n_fock
            target[start:start + cfg.n_fock] = sq[:, n_exc]
            idx = int(np.argmax(np.abs(evecs.conj().T @ target)))
            energies[(k_level, n_exc)] = evals[idx]
    return float((energies[(1, 1)] - energies[(1, 0)])
                 - (energies[(0, 1)] - energies[(0, 0)]))
