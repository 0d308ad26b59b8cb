"""
Command-line entry point.

Subcommands reproduce the false-alarm calibration and the three detection
sweeps as CSV, and run a single detection on a sample file::

    cyclosense calibrate --trials 20000
    cyclosense compare --snr-grid=-20,-16,-12,-8,-4,0
    cyclosense cp-sweep --delta-grid 0.5,1
    cyclosense symbols-sweep --n-ofdm-grid 16,32,64,128
    cyclosense detect capture.iq --target-pf 0.1

Settings are merged in this order: built-in command defaults, the
``[common]`` section of ``--config``, the command's own section
(``[calibrate]``, ``[compare]``, ``[cp_sweep]``, ``[symbols_sweep]``,
``[detect]``), then command-line flags.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import theory
from .detectors import DETECTOR_NAMES, DegenerateInputError, DetectorSettings, build_detectors, decide
from .montecarlo import ExperimentPlan, run_pd_experiment, run_pf_experiment
from .samplefile import SampleFileError, read_samples
from .signals import ModulationScheme, OfdmParams

__all__ = ["main", "build_parser", "load_settings", "DEFAULTS"]


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in _split(text))


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in _split(text))


def _fractions(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in _split(text))


def _names(text: str) -> tuple[str, ...]:
    return tuple(_split(text))


def _split(text: str) -> list[str]:
    return [v.strip() for v in str(text).replace(";", ",").split(",") if v.strip()]


def _opt_int(text: str) -> Optional[int]:
    return None if str(text).strip().lower() in ("", "none", "auto") else int(text)


# key -> parser; the documented config keys
KEYS: dict[str, Callable] = {
    "trials": int,
    "seed": int,
    "threads": int,
    "target_pf": float,
    "n_fft": int,
    "sigma2_nominal": float,
    "snr_grid": _floats,
    "delta_grid": _floats,
    "cp_ratios": _fractions,
    "n_ofdm_grid": _ints,
    "modulations": _names,
    "detectors": _names,
    "detector": str,
    "k_list": _ints,
    "beta": float,
    "eta_floor": float,
    "tau": _opt_int,
    "tau_bar": _opt_int,
    "thresholds": _floats,
    "n_samples": _opt_int,
}

_BASE = {
    "trials": 20000,
    "seed": 0,
    "threads": 1,
    "target_pf": 0.1,
    "n_fft": 512,
    "sigma2_nominal": 1.0,
    "snr_grid": (-10.0,),
    "delta_grid": (1.0,),
    "cp_ratios": (Fraction(1, 8),),
    "n_ofdm_grid": (32,),
    "modulations": ("QPSK",),
    "detectors": DETECTOR_NAMES,
    "detector": "multi5",
    "k_list": (-2, -1, 0, 1, 2),
    "beta": 0.412,
    "eta_floor": 1e-6,
    "tau": None,
    "tau_bar": None,
    "thresholds": (0.5, 1.0, 2.0, 3.0, 5.0, 9.0, 19.0, 49.0, 99.0),
    "n_samples": None,
}

DEFAULTS: dict[str, dict] = {
    # 1152 noise samples, tau = 128, tau_bar = 126
    "calibrate": {
        **_BASE,
        "n_fft": 128,
        "n_ofdm_grid": (8,),
        "delta_grid": (0.0,),
        "n_samples": 1152,
        "detectors": ("multi5", "single1"),
    },
    "compare": {
        **_BASE,
        "snr_grid": (-20.0, -18.0, -16.0, -14.0, -12.0, -10.0, -8.0, -6.0, -4.0, -2.0, 0.0),
        "modulations": ("QPSK", "16QAM", "64QAM"),
    },
    "cp_sweep": {
        **_BASE,
        "delta_grid": (0.5, 1.0),
        "cp_ratios": (Fraction(1, 32), Fraction(1, 16), Fraction(1, 8), Fraction(1, 4)),
    },
    "symbols_sweep": {
        **_BASE,
        "delta_grid": (0.5, 1.0),
        "n_ofdm_grid": (16, 32, 64, 128),
    },
    "detect": dict(_BASE),
}


class ConfigError(ValueError):
    pass


def load_settings(command: str, config_path: Optional[str], overrides: dict) -> dict:
    """Merge defaults, config file sections and command-line overrides."""
    section = command.replace("-", "_")
    settings = dict(DEFAULTS[section])
    if config_path:
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        try:
            with open(config_path) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from None
        known_sections = {"common", *DEFAULTS}
        for name in parser.sections():
            if name not in known_sections:
                raise ConfigError(f"unknown config section [{name}]")
        for name in ("common", section):
            if not parser.has_section(name):
                continue
            for key, raw in parser.items(name):
                if key not in KEYS:
                    raise ConfigError(f"unknown config key {key!r} in [{name}]")
                try:
                    settings[key] = KEYS[key](raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key!r} in [{name}]: {exc}") from None
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value
    _validate(settings)
    return settings


def _validate(s: dict) -> None:
    if s["trials"] < 1:
        raise ConfigError("trials must be >= 1")
    if s["threads"] < 1:
        raise ConfigError("threads must be >= 1")
    if not 0 < s["target_pf"] < 1:
        raise ConfigError("target_pf must lie in (0, 1)")
    for key in ("snr_grid", "delta_grid", "cp_ratios", "n_ofdm_grid", "modulations", "thresholds", "detectors"):
        if not s[key]:
            raise ConfigError(f"{key} must not be empty")
    if any(t <= 0 for t in s["thresholds"]):
        raise ConfigError("thresholds must be positive")
    if any(n < 1 for n in s["n_ofdm_grid"]):
        raise ConfigError("n_ofdm_grid entries must be >= 1")
    for m in s["modulations"]:
        ModulationScheme.parse(m)
    settings = _detector_settings(s)
    tau = s["n_fft"] if s["tau"] is None else s["tau"]
    tau_bar = s["n_fft"] - 2 if s["tau_bar"] is None else s["tau_bar"]
    if tau == tau_bar:
        raise ConfigError("tau_bar must differ from tau")
    # building every geometry checks integer n_cp, beta vs cyclic frequencies, lags
    for cp in s["cp_ratios"]:
        params = OfdmParams(n_fft=s["n_fft"], cp_ratio=cp, n_ofdm_symbols=s["n_ofdm_grid"][0])
        build_detectors(settings, params.n_fft, params.n_cp, s["sigma2_nominal"])


def _detector_settings(s: dict, names: Optional[Sequence[str]] = None) -> DetectorSettings:
    return DetectorSettings(
        names=tuple(names or s["detectors"]),
        k_list=s["k_list"],
        beta=s["beta"],
        eta_floor=s["eta_floor"],
        tau=s["tau"],
        tau_bar=s["tau_bar"],
    )


def _plan(s: dict, names: Optional[Sequence[str]] = None) -> ExperimentPlan:
    return ExperimentPlan(
        trials=s["trials"],
        master_seed=s["seed"],
        snr_grid_db=s["snr_grid"],
        delta_db_grid=s["delta_grid"],
        cp_ratios=s["cp_ratios"],
        n_ofdm_grid=s["n_ofdm_grid"],
        modulations=s["modulations"],
        detectors=_detector_settings(s, names),
        target_pf=s["target_pf"],
        n_fft=s["n_fft"],
        sigma2_nominal=s["sigma2_nominal"],
        n_samples=s["n_samples"],
        threads=s["threads"],
    )


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def _write_csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def cmd_calibrate(s: dict) -> str:
    """False-alarm rate versus threshold, simulated against ``1 / (lam + 1)``."""
    plan = _plan(s, ("single1", "multi5"))
    table = run_pf_experiment(plan, s["thresholds"])
    rows = []
    for lam in s["thresholds"]:
        single, multi = table["single1"][lam], table["multi5"][lam]
        rows.append([lam, theory.pf_of_threshold(lam), single.p_hat, multi.p_hat, multi.ci_low, multi.ci_high])
    header = ["threshold", "pf_theory", "pf_sim_single", "pf_sim_multi", "ci_low", "ci_high"]
    return _write_csv(rows, header)


def cmd_compare(s: dict) -> str:
    rows = [
        [r.point.snr_db, r.point.modulation.label, r.detector, r.estimate.p_hat, r.estimate.ci_low, r.estimate.ci_high]
        for r in run_pd_experiment(_plan(s))
    ]
    return _write_csv(rows, ["snr_db", "modulation", "detector", "pd", "ci_low", "ci_high"])


def cmd_cp_sweep(s: dict) -> str:
    rows = [
        [r.point.cp_ratio, r.point.delta_db, r.detector, r.estimate.p_hat, r.estimate.ci_low, r.estimate.ci_high]
        for r in run_pd_experiment(_plan(s))
    ]
    return _write_csv(rows, ["cp_ratio", "delta_db", "detector", "pd", "ci_low", "ci_high"])


def cmd_symbols_sweep(s: dict) -> str:
    rows = [
        [r.point.n_ofdm, r.point.delta_db, r.detector, r.estimate.p_hat, r.estimate.ci_low, r.estimate.ci_high]
        for r in run_pd_experiment(_plan(s))
    ]
    return _write_csv(rows, ["n_ofdm", "delta_db", "detector", "pd", "ci_low", "ci_high"])


def cmd_detect(s: dict, path: str) -> str:
    """One-line JSON decision report for a sample file."""
    x = read_samples(path)
    name = s["detector"]
    if name not in DETECTOR_NAMES:
        raise ConfigError(f"unknown detector {name!r}")
    params = OfdmParams(n_fft=s["n_fft"], cp_ratio=s["cp_ratios"][0])
    det = build_detectors(_detector_settings(s, (name,)), params.n_fft, params.n_cp, s["sigma2_nominal"])[name]
    stat = det.statistic(x)
    lam = det.threshold(s["target_pf"], x.size)
    result = decide(stat, lam)
    report = {
        "file": str(path),
        "detector": name,
        "n_samples": int(x.size),
        "statistic": result.statistic,
        "threshold": result.threshold,
        "target_pf": s["target_pf"],
        "decision": result.decision.value,
    }
    return json.dumps(report) + "\n"


COMMANDS = {
    "calibrate": cmd_calibrate,
    "compare": cmd_compare,
    "cp-sweep": cmd_cp_sweep,
    "symbols-sweep": cmd_symbols_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [common] and per-command sections")
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--output", "-o", help="write output here instead of stdout")
    common.add_argument("--target-pf", type=float)
    common.add_argument("--n-fft", type=int)
    common.add_argument("--sigma2-nominal", type=float)
    common.add_argument("--snr-grid", type=_floats, help="comma-separated SNRs in dB")
    common.add_argument("--delta-grid", type=_floats, help="noise uncertainty values in dB")
    common.add_argument("--cp-ratios", type=_fractions, help="e.g. 1/32,1/16,1/8,1/4")
    common.add_argument("--n-ofdm-grid", type=_ints)
    common.add_argument("--modulations", type=_names, help="QPSK,16QAM,64QAM")
    common.add_argument("--detectors", type=_names, help=",".join(DETECTOR_NAMES))
    common.add_argument("--k-list", type=_ints, help="cyclic indices, default -2,-1,0,1,2")
    common.add_argument("--beta", type=float)
    common.add_argument("--eta-floor", type=float)
    common.add_argument("--tau", type=int)
    common.add_argument("--tau-bar", type=int)
    common.add_argument("--n-samples", type=int, help="observation length for calibrate")
    common.add_argument("--thresholds", type=_floats)

    parser = argparse.ArgumentParser(
        prog="cyclosense", description="Multi-cycle cyclostationary OFDM spectrum sensing"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("calibrate", parents=[common], help="false-alarm rate vs threshold")
    sub.add_parser("compare", parents=[common], help="Pd vs SNR per modulation and detector")
    sub.add_parser("cp-sweep", parents=[common], help="Pd vs cyclic prefix ratio")
    sub.add_parser("symbols-sweep", parents=[common], help="Pd vs number of OFDM symbols")
    detect = sub.add_parser("detect", parents=[common], help="decide H0/H1 for one sample file")
    detect.add_argument("samples", help=".csv (I,Q per line) or raw interleaved float64 file")
    detect.add_argument("--detector", choices=DETECTOR_NAMES)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {key: getattr(args, key, None) for key in KEYS}
    try:
        settings = load_settings(args.command, args.config, overrides)
        if args.command == "detect":
            text = cmd_detect(settings, args.samples)
        else:
            text = COMMANDS[args.command](settings)
    except (ValueError, SampleFileError, DegenerateInputError) as exc:
        print(f"cyclosense {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
