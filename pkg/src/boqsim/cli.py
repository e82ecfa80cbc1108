"""Command-line front end: reproduces the theory datasets (gain maps,
gain-bandwidth sweeps, qubit spectral response, chi enhancement) and runs
oracle comparisons, emitting self-describing CSV/JSON for external plotting.

Exit codes: 0 success, 2 config error, 3 numerical failure; errors are
reported as one-line JSON on stderr.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import calibration, dispersive, lindblad, scattering, spectral
from .core import (DriveSpec, OscillatorParams, StabilityError,
                   TransmonParams, frame_of, lambda_coalescence,
                   lambda_critical, parse_flat, validate)

# default squeezing-amplitude cap for qubit-facing sweeps (dB); keeps the
# oscillator occupancy at or below ~1.2 photons on every branch
S_DB_CAP = 8.0


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config and output plumbing


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return parse_flat(text)


def _get_floats(cfg: dict, key: str, default: list[float]) -> list[float]:
    raw = cfg.get(key)
    if raw is None:
        return list(default)
    if isinstance(raw, (int, float)):
        return [float(raw)]
    if isinstance(raw, (list, tuple)):
        return [float(x) for x in raw]
    try:
        return [float(tok) for tok in str(raw).split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: expected numbers") from exc


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def meta_block(params: dict, timestamp: bool) -> str:
    lines = []
    if timestamp:
        lines.append(f"# generated: "
                     f"{datetime.datetime.now(datetime.timezone.utc).isoformat()}")
    for key, val in params.items():
        lines.append(f"# {key} = {val}")
    return "\n".join(lines) + "\n"


def _fmt(val) -> str:
    if isinstance(val, float):
        return f"{val:.10g}"
    return str(val)


def write_csv(path: Path, meta: dict, header: list[str], rows,
              timestamp: bool) -> None:
    body = [meta_block(meta, timestamp), ",".join(header) + "\n"]
    for row in rows:
        body.append(",".join(_fmt(v) for v in row) + "\n")
    write_atomic(path, "".join(body))


def _kappa(cfg: dict) -> float:
    kappa = float(cfg.get("kappa", 8.7))
    if not kappa > 0.0:
        raise ConfigError(f"kappa must be positive, got {kappa}")
    return kappa


def _oscillator(cfg: dict, delta_a: float, lam: float) -> OscillatorParams:
    return OscillatorParams(freq_a=float(cfg.get("freq_a", 6940.0)),
                            kappa=float(cfg.get("kappa", 8.7)),
                            delta_a=delta_a, lam=lam)


def _transmon(cfg: dict, delta_a: float) -> TransmonParams:
    delta_q = float(cfg.get("delta_q", delta_a
                            + float(cfg.get("delta_q_offset", -100.0))))
    return TransmonParams(delta_q=delta_q,
                          g=float(cfg.get("g", 4.9)),
                          chi_q=float(cfg.get("chi_q", -114.0)),
                          gamma_1=float(cfg.get("gamma_1", 5.0)),
                          gamma_phi=float(cfg.get("gamma_phi", 2.2)),
                          n_levels=int(cfg.get("n_levels", 3)))


def _lam_cap_detuned(delta_a: float, kappa: float) -> float:
    """Largest pump amplitude kept in qubit-facing sweeps: the S_DB_CAP
    squeezing amplitude, also below coalescence and the critical line."""
    r_cap = S_DB_CAP * math.log(10.0) / 20.0
    lam = abs(delta_a) * math.tanh(2.0 * r_cap)
    l_co = lambda_coalescence(kappa, delta_a)
    if l_co is not None:
        lam = min(lam, 0.99 * l_co)
    return min(lam, 0.99 * lambda_critical(kappa, delta_a))


def _lam_cap_resonant(kappa: float) -> float:
    """Pump amplitude where the resonant anti-squeezing reaches S_DB_CAP."""
    s_inf = 10.0 ** (S_DB_CAP / 10.0)
    return kappa / 2.0 * (1.0 - 1.0 / s_inf)


# ---------------------------------------------------------------------------
# commands


def cmd_gain_map(cfg: dict, out: Path, args) -> None:
    kappa = _kappa(cfg)
    deltas = _get_floats(cfg, "delta_a_list", [0.0, 30.0, -30.0])
    span = float(cfg.get("probe_span", 60.0))
    n_probe = int(cfg.get("probe_points", 241))
    n_lam = int(cfg.get("lam_points", 25))
    lam_factor = float(cfg.get("lam_max_factor", 0.98))
    probes = np.linspace(-span, span, n_probe)
    rows, skipped = [], []
    for delta_a in deltas:
        l_crit = lambda_critical(kappa, delta_a)
        for lam in np.linspace(0.0, lam_factor * l_crit, n_lam):
            p = _oscillator(cfg, delta_a, float(lam))
            if not validate(p).stable:
                skipped.append(f"delta_a={delta_a} lam={lam:.6g}: unstable")
                continue
            vals = scattering.gamma_signal(p, probes)
            with np.errstate(divide="ignore"):
                abs_db = 20.0 * np.log10(np.abs(vals))
            phase = np.angle(vals)
            for w, adb, ph in zip(probes, abs_db, phase):
                rows.append((delta_a, float(lam), float(w), float(adb),
                             float(ph)))
    meta = {"command": "gain_map", "kappa": kappa,
            "delta_a_list": ",".join(map(_fmt, deltas)),
            "probe_span": span, "probe_points": n_probe,
            "lam_points": n_lam, "seed": args.seed}
    write_csv(out / "gain_map.csv", meta,
              ["delta_a", "lam", "freq_mhz", "abs_db", "phase_rad"],
              rows, not args.no_timestamp)
    if skipped:
        write_atomic(out / "gain_map.log", "\n".join(skipped) + "\n")


def _lambda_at_gain(cfg: dict, kappa: float, delta_a: float,
                    g_target: float, grid: np.ndarray) -> float:
    """Pump amplitude whose refined peak gain equals g_target (monotone)."""
    from scipy.optimize import brentq

    def excess(lam):
        p = _oscillator(cfg, delta_a, lam)
        return scattering.peak_gain(p, grid)[1] - g_target

    l_hi = 0.9995 * lambda_critical(kappa, delta_a)
    if excess(l_hi) < 0:
        raise ValueError(f"target gain {g_target:.3g} unreachable below "
                         "the instability threshold")
    return float(brentq(excess, 1e-6, l_hi, xtol=1e-10))


def cmd_gbw(cfg: dict, out: Path, args) -> None:
    kappa = _kappa(cfg)
    deltas = _get_floats(cfg, "delta_a_list", [0.0, 30.0])
    gains_db = _get_floats(cfg, "gains_db", [3.0, 6.0, 9.0, 12.0])
    rows = []
    for delta_a in deltas:
        span = max(3.0 * kappa, 2.0 * abs(delta_a) + 3.0 * kappa)
        grid = np.linspace(-span, span, 2001)
        l_co = lambda_coalescence(kappa, delta_a)
        for g_db in gains_db:
            g_target = 10.0 ** (g_db / 10.0)
            lam = _lambda_at_gain(cfg, kappa, delta_a, g_target, grid)
            p = _oscillator(cfg, delta_a, lam)
            summ = scattering.gain_summary(p, grid)
            bw_fit, split = scattering.fit_bandwidth(p)
            merged = int(l_co is not None and lam >= l_co)
            rows.append((delta_a, lam, 10.0 * math.log10(summ.g_max),
                         summ.peak_freq, summ.bw_3db, bw_fit,
                         summ.bw_3db * math.sqrt(summ.g_max),
                         summ.n_peaks, merged))
    meta = {"command": "gbw", "kappa": kappa,
            "delta_a_list": ",".join(map(_fmt, deltas)),
            "gains_db": ",".join(map(_fmt, gains_db)), "seed": args.seed}
    write_csv(out / "gbw.csv", meta,
              ["delta_a", "lam", "g_max_db", "peak_freq", "bw_3db",
               "bw_fit", "bw_sqrt_g", "n_peaks", "merged"],
              rows, not args.no_timestamp)


def _chi0_transmon(q: TransmonParams, delta_a: float, kappa: float):
    """Dispersive result at zero pump (r = 0, Omega_a = delta_a)."""
    from .core import BogoliubovFrame
    frame0 = BogoliubovFrame(r=0.0, s_db=0.0, omega_bog=delta_a)
    return dispersive.chi_transmon(q, frame0, kappa=kappa)


def _qubit_response_rows(cfg: dict, use_oracle: bool):
    kappa = _kappa(cfg)
    deltas = _get_floats(cfg, "delta_a_list",
                         [0.0, 20.0, -20.0, 30.0, -30.0, 40.0, -40.0])
    n_lam = int(cfg.get("lam_points", 21))
    shift_rows, deph_rows = [], []
    for delta_a in deltas:
        q = _transmon(cfg, delta_a)
        if delta_a == 0.0:
            chi0 = _chi0_transmon(q, delta_a, kappa).chi
            for lam in np.linspace(0.0, _lam_cap_resonant(kappa), n_lam):
                p = _oscillator(cfg, delta_a, float(lam))
                res = spectral.resonant_driven_shift(p, chi0, DriveSpec())
                mom = spectral.resonant_steady_state(p)
                s_db = 10.0 * math.log10(mom.s_inf)
                flags = ";".join(res.flags)
                row = [delta_a, float(lam), s_db]
                shift_rows.append(tuple(row + [res.d_omega_q, flags]))
                deph_rows.append(tuple(row + [res.d_gamma_phi, flags]))
            continue
        chi_res0 = _chi0_transmon(q, delta_a, kappa)
        for lam in np.linspace(0.0, _lam_cap_detuned(delta_a, kappa), n_lam):
            p = _oscillator(cfg, delta_a, float(lam))
            frame = frame_of(p)
            chi_res = dispersive.chi_transmon(q, frame, kappa=kappa)
            res = spectral.shift_undriven(
                chi_res.chi, chi_res0.chi, frame, kappa, variant="transmon",
                delta_q_2_r=chi_res.delta_q_2, delta_q_2_0=chi_res0.delta_q_2)
            flags = list(res.flags)
            if not chi_res.dispersive_valid:
                flags.append("dispersive_invalid")
            row = [delta_a, float(lam), frame.s_db]
            if use_oracle:
                lcfg = lindblad.LindbladConfig(
                    n_fock=int(cfg.get("n_fock", lindblad.default_n_fock(p))),
                    n_transmon=3)
                orc = lindblad.qubit_shift_dephasing(p, q, lcfg)
                shift_rows.append(tuple(
                    row + [res.d_omega_q, orc.d_omega_q, ";".join(flags)]))
                deph_rows.append(tuple(
                    row + [res.d_gamma_phi, orc.d_gamma_phi,
                           ";".join(flags)]))
            else:
                shift_rows.append(tuple(row + [res.d_omega_q,
                                               ";".join(flags)]))
                deph_rows.append(tuple(row + [res.d_gamma_phi,
                                              ";".join(flags)]))
    return kappa, deltas, shift_rows, deph_rows


def cmd_qubit_response(cfg: dict, out: Path, args) -> None:
    kappa, deltas, shift_rows, deph_rows = _qubit_response_rows(
        cfg, args.oracle)
    meta = {"command": "qubit_response", "kappa": kappa,
            "delta_a_list": ",".join(map(_fmt, deltas)),
            "s_db_cap": S_DB_CAP, "oracle": int(args.oracle),
            "seed": args.seed}
    base = ["delta_a", "lam", "s_db"]
    if args.oracle:
        h_shift = base + ["d_omega_q", "d_omega_q_oracle", "flags"]
        h_deph = base + ["d_gamma_phi", "d_gamma_phi_oracle", "flags"]
    else:
        h_shift = base + ["d_omega_q", "flags"]
        h_deph = base + ["d_gamma_phi", "flags"]
    write_csv(out / "qubit_shift.csv", meta, h_shift, shift_rows,
              not args.no_timestamp)
    write_csv(out / "qubit_dephasing.csv", meta, h_deph, deph_rows,
              not args.no_timestamp)


def _fit_chi_synthetic(chi_true: float, frame, kappa: float,
                       snr_db: float | None,
                       rng: np.random.Generator) -> float:
    """Round-trip: generate driven shifts from the closed forms and fit a
    scalar chi back out of them."""
    n_ds = np.linspace(0.1, 0.6, 6)
    d_omega, d_gamma = [], []
    for n_d in n_ds:
        res = spectral.shift_driven(chi_true, frame, DriveSpec(n_d=n_d),
                                    kappa)
        d_omega.append(res.d_omega_q)
        d_gamma.append(res.d_gamma_phi)
    d_omega = np.array(d_omega)
    d_gamma = np.array(d_gamma)
    if snr_db is not None:
        scale = 10.0 ** (-snr_db / 20.0)
        d_omega = d_omega * (1.0 + scale * rng.standard_normal(len(n_ds)))
        d_gamma = d_gamma * (1.0 + scale * rng.standard_normal(len(n_ds)))
    rep = calibration.fit_chi_enhanced(n_ds, d_omega, d_gamma, frame, kappa)
    return rep.params["chi"]


def cmd_chi_sweep(cfg: dict, out: Path, args) -> None:
    kappa = _kappa(cfg)
    deltas = _get_floats(cfg, "delta_a_list", [0.0, 20.0])
    n_lam = int(cfg.get("lam_points", 13))
    snr_db = cfg.get("snr_db")
    snr_db = float(snr_db) if snr_db is not None else None
    rng = np.random.default_rng(args.seed)
    rows = []
    for delta_a in deltas:
        q = _transmon(cfg, delta_a)
        chi0 = _chi0_transmon(q, delta_a, kappa).chi
        if delta_a == 0.0:
            # resonant branch: shift per intracavity photon; flat by
            # construction of the photon-number normalization
            for lam in np.linspace(0.0, _lam_cap_resonant(kappa), n_lam):
                p = _oscillator(cfg, delta_a, float(lam))
                n_ds = np.linspace(0.1, 0.6, 6)
                d_omega, n_cav = [], []
                for n_d in n_ds:
                    res = spectral.resonant_driven_shift(
                        p, chi0, DriveSpec(n_d=n_d, theta=math.pi / 4.0))
                    d_omega.append(res.parts["drive"])
                    n_cav.append(res.parts["drive"] / chi0)
                chi_fit = float(np.polyfit(n_cav, d_omega, 1)[0])
                s_db = 10.0 * math.log10(
                    spectral.resonant_steady_state(p).s_inf)
                row = [delta_a, float(lam), s_db, chi0, chi_fit]
                if args.oracle:
                    row.append(float("nan"))  # no squeezing frame at delta_a=0
                rows.append(tuple(row))
            continue
        for lam in np.linspace(0.0, _lam_cap_detuned(delta_a, kappa), n_lam):
            p = _oscillator(cfg, delta_a, float(lam))
            frame = frame_of(p)
            chi_r = dispersive.chi_transmon(q, frame, kappa=kappa).chi
            chi_fit = _fit_chi_synthetic(chi_r, frame, kappa, snr_db, rng)
            row = [delta_a, float(lam), frame.s_db, chi_r, chi_fit]
            if args.oracle:
                lcfg = lindblad.LindbladConfig(
                    n_fock=int(cfg.get("n_fock", lindblad.default_n_fock(p))),
                    n_transmon=3)
                if lam == 0.0:
                    row.append(chi0)
                else:
                    row.append(lindblad.chi_exact(p, q, lcfg))
            rows.append(tuple(row))
    header = ["delta_a", "lam", "s_db", "chi_analytic", "chi_fit"]
    if args.oracle:
        header.append("chi_oracle")
    meta = {"command": "chi_sweep", "kappa": kappa,
            "delta_a_list": ",".join(map(_fmt, deltas)),
            "snr_db": snr_db, "oracle": int(args.oracle), "seed": args.seed}
    write_csv(out / "chi_vs_lambda.csv", meta, header, rows,
              not args.no_timestamp)


def _rel(err_num: float, ref: float) -> float:
    return abs(err_num - ref) / max(abs(ref), 1e-30)


def cmd_oracle_compare(cfg: dict, out: Path, args) -> None:
    kappa = _kappa(cfg)
    thetas = np.array([0.0, math.pi / 4.0, math.pi / 2.0])
    resonant = []
    for ratio in _get_floats(cfg, "lam_ratios",
                             list(np.round(np.arange(0.1, 0.95, 0.1), 2))):
        p = _oscillator(cfg, 0.0, ratio * kappa / 2.0)
        mom = spectral.resonant_steady_state(p)
        liou = lindblad.build_liouvillian(p)
        res = lindblad.steady_state(liou, thetas=thetas)
        vx = np.array([mom.var_x(t, kappa, p.lam) for t in thetas])
        vp = np.array([mom.var_p(t, kappa, p.lam) for t in thetas])
        resonant.append({
            "lam_ratio": ratio,
            "n_mean_analytic": mom.n_mean, "n_mean_oracle": res.n_mean,
            "rel_err_n": _rel(res.n_mean, mom.n_mean),
            "rel_err_a_sq": abs(res.a_sq - mom.a_sq) / abs(mom.a_sq),
            "rel_err_var_max": float(max(
                np.max(np.abs(res.var_x - vx) / vx),
                np.max(np.abs(res.var_p - vp) / vp))),
            "n_fock": res.n_fock,
            "truncation_converged": res.truncation_converged,
        })
    delta_a = float(cfg.get("delta_a", 20.0))
    lam = float(cfg.get("lam", 17.0))
    p = _oscillator(cfg, delta_a, lam)
    q = _transmon(cfg, delta_a)
    frame = frame_of(p)
    chi_res = dispersive.chi_transmon(q, frame, kappa=kappa)
    chi_res0 = _chi0_transmon(q, delta_a, kappa)
    anom = spectral.anomalous_moment(p, frame)
    ana = spectral.shift_undriven(
        chi_res.chi, chi_res0.chi, frame, kappa, variant="transmon",
        delta_q_2_r=chi_res.delta_q_2, delta_q_2_0=chi_res0.delta_q_2,
        chi_anomalous=chi_res.chi_anomalous, anomalous=anom)
    lcfg = lindblad.LindbladConfig(
        n_fock=int(cfg.get("n_fock", lindblad.default_n_fock(p))),
        n_transmon=3)
    orc = lindblad.qubit_shift_dephasing(p, q, lcfg)
    chi_ed = lindblad.chi_exact(p, q, lcfg)
    report = {
        "resonant_moments": resonant,
        "dispersive": {
            "params": {"kappa": kappa, "delta_a": delta_a, "lam": lam,
                       "delta_q": q.delta_q, "g": q.g, "chi_q": q.chi_q,
                       "gamma_1": q.gamma_1, "gamma_phi": q.gamma_phi},
            "d_omega_analytic": ana.d_omega_q,
            "d_omega_oracle": orc.d_omega_q,
            "rel_err_d_omega": _rel(orc.d_omega_q, ana.d_omega_q),
            "d_gamma_analytic": ana.d_gamma_phi,
            "d_gamma_oracle": orc.d_gamma_phi,
            "rel_err_d_gamma": _rel(orc.d_gamma_phi, ana.d_gamma_phi),
            "chi_analytic": chi_res.chi,
            "chi_exact": chi_ed,
            "rel_err_chi": _rel(chi_ed, chi_res.chi),
        },
    }
    write_atomic(out / "oracle_report.json",
                 json.dumps(report, indent=2) + "\n")


COMMANDS = {
    "gain_map": cmd_gain_map,
    "gbw": cmd_gbw,
    "qubit_response": cmd_qubit_response,
    "chi_sweep": cmd_chi_sweep,
    "oracle_compare": cmd_oracle_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boqsim",
        description="Squeezed-oscillator / qubit theory datasets and "
                    "oracle comparisons.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", default=None,
                         help="flat 'name = value' or JSON parameter file")
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument("--oracle", action="store_true",
                         help="add Lindblad-oracle columns (slow)")
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--no-timestamp", action="store_true",
                         help="omit the timestamp metadata line")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc), "kind": "config"}),
              file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](cfg, out, args)
    except (ConfigError, KeyError) as exc:
        print(json.dumps({"error": str(exc), "kind": "config"}),
              file=sys.stderr)
        return 2
    except (StabilityError, lindblad.UnstableDynamics,
            lindblad.TruncationError, ValueError,
            np.linalg.LinAlgError) as exc:
        print(json.dumps({"error": str(exc), "kind": "numerical"}),
              file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
