"""Command-line front end.

Subcommands: convert | field | phase | bound | deflect | sweep | refs.
Data goes to stdout (or to --out files); diagnostics go to stderr.  Exit
codes: 0 success, 2 experiment-description/usage errors, 3 domain errors
(validity windows, unreachable brackets, solver failures).  Machine outputs
are bit-identical across runs: reports carry no timestamps, JSON keys are
sorted, and floats are serialized with a fixed format.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds as bounds_mod
from . import deflection as deflection_mod
from . import field as field_mod
from . import phases as phases_mod
from . import units
from .config import DEFAULT_EPSILON, ExperimentConfig, load_config
from .errors import ConfigError, DomainError

SCHEMA_VERSION = "1"

CONVENTIONS = {
    "pm_q_superposition_doubling": phases_mod.SUPERPOSITION_DOUBLING,
    "min_aspect_ratio": phases_mod.MIN_ASPECT_RATIO,
    "asymptotic_window_m_L": field_mod.ASYMPTOTIC_WINDOW,
    "threshold": "2*pi*epsilon",
}


def _fmt(x):
    """Human numeric format: 6 significant digits."""
    return f"{x:.6g}"


def make_report(inputs, results, diagnostics=None):
    diag = {"conventions": CONVENTIONS}
    diag.update(diagnostics or {})
    return {
        "schema_version": SCHEMA_VERSION,
        "constants_version": units.CONSTANTS_VERSION,
        "inputs": inputs,
        "results": results,
        "diagnostics": diag,
    }


def validate_report(report):
    """Re-validate an emitted JSON report against the stamped schema."""
    if not isinstance(report, dict):
        raise ValueError("report must be a JSON object")
    if report.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema_version {report.get('schema_version')!r}"
        )
    for key in ("constants_version", "inputs", "results", "diagnostics"):
        if key not in report:
            raise ValueError(f"report missing top-level key {key!r}")
    if not isinstance(report["inputs"], dict) or not isinstance(report["diagnostics"], dict):
        raise ValueError("inputs and diagnostics must be objects")
    return report


def _emit_json(report, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _emit_csv(columns, rows, out):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(str(row[c]) for c in columns))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# experiment-object construction

def _build_solenoid(cfg_values, effect):
    kwargs = {
        "radius_cm": cfg_values["a_cm"],
        "interior_field_gauss": cfg_values["j_gauss"],
    }
    if "length_cm" in cfg_values:
        kwargs["physical_length_cm"] = cfg_values["length_cm"]
    if effect == "tkachuk":
        kwargs["tkachuk_length_cm"] = cfg_values["l_cm"]
        if "mu_bar_gauss_cm" in cfg_values:
            kwargs["magnetization_gauss_cm"] = cfg_values["mu_bar_gauss_cm"]
    return field_mod.SolenoidSpec(**kwargs)


def _build_path(cfg_values, effect):
    if effect == "pm_q":
        return phases_mod.PathSpec.open_segment(
            half_length_cm=cfg_values["x_cm"], offset_cm=cfg_values["y_cm"])
    return phases_mod.PathSpec.closed_loop(cfg_values["rho_cm"])


def _build_probe(cfg_values, effect):
    if effect == "tkachuk":
        return phases_mod.ProbeSpec.electric_dipole(cfg_values["d_statc_cm"])
    return phases_mod.ProbeSpec.charge(cfg_values["q_statc"])


def _mass_from(cfg, override=None):
    if override is not None:
        return units.InverseRange.from_range_cm(override)
    rng = cfg.get("m_gamma_inv_cm")
    if rng is None:
        raise ConfigError(
            "a photon mass is required: set m_gamma_inv_cm in the config "
            "(the range m_gamma^-1 in cm) or pass --m-inv-cm",
            key="m_gamma_inv_cm",
        )
    return units.InverseRange.from_range_cm(rng)


_EFFECT_FN = {
    "ab_closed": phases_mod.ab_closed,
    "tkachuk": phases_mod.tkachuk,
    "pm_q": phases_mod.open_path_pm_q,
}


def _phase_pair(cfg_values, effect, m):
    solenoid = _build_solenoid(cfg_values, effect)
    path = _build_path(cfg_values, effect)
    probe = _build_probe(cfg_values, effect)
    return _EFFECT_FN[effect](probe, solenoid, path, m)


# ---------------------------------------------------------------------------
# subcommands

def cmd_convert(args):
    results = {}
    if args.delta_t_years is not None:
        dt = args.delta_t_years * units.YEAR_SECONDS
        mass = units.uncertainty_mass(dt)
        results["delta_t_s"] = dt
        results["m_ph_g"] = mass.value
        results["m_gamma_inv_cm"] = units.to_inverse_cm(mass).range_cm
    elif args.inv_cm is not None:
        m = units.InverseRange.from_range_cm(args.inv_cm)
        results["m_gamma_inv_cm"] = args.inv_cm
        results["m_ph_g"] = units.to_grams(m).value
        results["lambda_compton_cm"] = m.compton_wavelength_cm
    elif args.grams is not None:
        m = units.to_inverse_cm(args.grams)
        results["m_ph_g"] = args.grams
        results["m_gamma_inv_cm"] = m.range_cm
        results["lambda_compton_cm"] = m.compton_wavelength_cm
    else:
        raise ConfigError("convert needs one of --inv-cm, --grams, --delta-t-years")
    if args.json:
        _emit_json(make_report(vars_inputs(args), results), args.out)
    else:
        for key, value in results.items():
            print(f"{key} = {_fmt(value)}")
    return 0


def vars_inputs(args):
    skip = {"func", "out", "json"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def cmd_field(args):
    solenoid = field_mod.SolenoidSpec(radius_cm=args.a, interior_field_gauss=args.j)
    rho_min = args.rho_min if args.rho_min is not None else 0.01 * args.a
    grid = np.geomspace(rho_min, args.rho_max, args.points)
    m = units.InverseRange(args.m)
    if args.oracle:
        profile = field_mod.ode_oracle(solenoid, m, grid)
        print(f"oracle diagnostics: {profile.diagnostics}", file=sys.stderr)
    else:
        profile = field_mod.field_profile(solenoid, m, grid)
    residual = np.empty_like(grid)
    for i, rho in enumerate(grid):
        flux = field_mod.enclosed_flux_quad(rho, solenoid, m)
        stokes = 2.0 * math.pi * rho * profile.a_phi[i]
        residual[i] = abs(stokes - flux) / max(abs(flux), abs(stokes), 1e-300)
    text = profile.to_csv(args.out if args.out else sys.stdout,
                          extra_columns={"stokes_residual": residual})
    if args.out:
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def cmd_phase(args):
    cfg = load_config(args.config)
    m = _mass_from(cfg, args.m_inv_cm)
    pair = _phase_pair(cfg.values, cfg.effect, m)
    results = {
        "exact_quadrature": pair.exact.to_json_dict(),
        "asymptotic": pair.asymptotic.to_json_dict() if pair.asymptotic else None,
    }
    report = make_report(cfg.to_json_dict(), results,
                         {"m_gamma_inv_cm": m.range_cm})
    _emit_json(report, args.out)
    return 0


def _bound_rows(cfg):
    effect = cfg.effect
    solenoid = _build_solenoid(cfg.values, effect)
    path = _build_path(cfg.values, effect)
    probe = _build_probe(cfg.values, effect)
    prec = bounds_mod.PrecisionSpec(cfg.epsilon)
    rows, attempts = [], []
    if effect == "pm_q":
        rows.append(bounds_mod.compare_pm_q(solenoid, path))
    for method in ("asymptotic", "exact_quadrature"):
        try:
            rows.append(bounds_mod.invert_bound(
                effect, probe, solenoid, path, prec, method=method))
        except DomainError as exc:
            attempts.append({"method": method, "error": str(exc)})
    return rows, attempts


def cmd_bound(args):
    cfg = load_config(args.config)
    rows, attempts = _bound_rows(cfg)
    if not rows:
        raise DomainError("; ".join(a["error"] for a in attempts))
    csv_rows = [r.to_csv_row() for r in rows]
    if args.csv:
        _emit_csv(bounds_mod.BoundResult.CSV_COLUMNS, csv_rows, args.csv)
    results = {
        "bounds": [
            {
                "effect": r.effect,
                "epsilon": r.epsilon,
                "m_gamma_inv_cm": r.inverse_range_cm,
                "m_ph_g": r.mass.value,
                "ratio_vs_bd": r.ratio_vs_bd,
                "method": r.method,
                "diagnostics": _json_safe(r.diagnostics),
            }
            for r in rows
        ]
    }
    report = make_report(cfg.to_json_dict(), results,
                         {"failed_attempts": attempts})
    _emit_json(report, args.out)
    return 0


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return None
    return obj


def cmd_deflect(args):
    cfg = load_config(args.config)
    m = _mass_from(cfg, args.m_inv_cm)
    solenoid = _build_solenoid(cfg.values, cfg.effect)
    if "x_cm" in cfg.values and "y_cm" in cfg.values:
        path = phases_mod.PathSpec.open_segment(
            half_length_cm=cfg.values["x_cm"], offset_cm=cfg.values["y_cm"])
    elif "rho_cm" in cfg.values:
        path = deflection_mod.default_reference_path(
            offset_cm=cfg.values["rho_cm"], half_length_cm=args.half_length)
    else:
        raise ConfigError("deflect needs x_cm/y_cm or rho_cm in the config")
    beam = deflection_mod.electron_probe(args.energy_kev)
    result = deflection_mod.deflect(
        beam, solenoid, path, m,
        detector_distance_cm=args.detector_cm,
        slit_separation_cm=args.slit_cm,
    )
    inputs = cfg.to_json_dict()
    inputs.update({
        "beam_energy_kev": args.energy_kev,
        "detector_cm": args.detector_cm,
        "slit_cm": args.slit_cm,
        "path_half_length_cm": path.half_length_cm,
        "path_offset_cm": path.offset_cm,
        "m_gamma_inv_cm": m.range_cm,
    })
    report = make_report(inputs, result.to_json_dict())
    _emit_json(report, args.out)
    return 0


_PHASE_SWEEP_COLUMNS = ("parameter", "value", "phi0_rad_asym", "delta_phi_rad_asym",
                        "ratio_asym", "phi0_rad_exact", "delta_phi_rad_exact",
                        "ratio_exact")


def cmd_sweep(args):
    cfg = load_config(args.config)
    if cfg.sweep is None:
        raise ConfigError("sweep subcommand needs a `sweep = ...` line", key="sweep")
    param = cfg.sweep.parameter
    points = np.sort(np.asarray(cfg.sweep.values(), dtype=float))
    rows = []
    if param == "epsilon":
        solenoid = _build_solenoid(cfg.values, cfg.effect)
        path = _build_path(cfg.values, cfg.effect)
        probe = _build_probe(cfg.values, cfg.effect)
        for eps in points:
            res = bounds_mod.invert_bound(cfg.effect, probe, solenoid, path,
                                          bounds_mod.PrecisionSpec(float(eps)),
                                          method="auto")
            row = {"parameter": param, "value": f"{eps:.12g}"}
            row.update(res.to_csv_row())
            rows.append(row)
        columns = ("parameter", "value") + bounds_mod.BoundResult.CSV_COLUMNS
    else:
        if param != "m_gamma_inv_cm" and "m_gamma_inv_cm" not in cfg.values:
            raise ConfigError("sweeping a geometry parameter needs m_gamma_inv_cm",
                              key="m_gamma_inv_cm")
        for value in points:
            values = dict(cfg.values)
            values[param] = float(value)
            m = units.InverseRange.from_range_cm(values["m_gamma_inv_cm"])
            pair = _phase_pair(values, cfg.effect, m)
            asym = pair.asymptotic
            rows.append({
                "parameter": param,
                "value": f"{value:.12g}",
                "phi0_rad_asym": f"{asym.phi0_rad:.12g}" if asym else "",
                "delta_phi_rad_asym": f"{asym.delta_phi_rad:.12g}" if asym else "",
                "ratio_asym": f"{asym.ratio:.12g}" if asym else "",
                "phi0_rad_exact": f"{pair.exact.phi0_rad:.12g}",
                "delta_phi_rad_exact": f"{pair.exact.delta_phi_rad:.12g}",
                "ratio_exact": f"{pair.exact.ratio:.12g}",
            })
        columns = _PHASE_SWEEP_COLUMNS
    _emit_csv(columns, rows, args.out)
    return 0


def cmd_refs(args):
    rows = [
        {
            "label": b.label,
            "m_gamma_inv_cm": f"{b.range_cm:.12g}",
            "m_ph_g": f"{b.mass.value:.12g}",
            "source": f"\"{b.source}\"",
        }
        for b in units.reference_bounds()
    ]
    if args.json:
        results = {"bounds": [
            {"label": b.label, "m_gamma_inv_cm": b.range_cm,
             "m_ph_g": b.mass.value, "source": b.source}
            for b in units.reference_bounds()
        ]}
        _emit_json(make_report({}, results), args.out)
    else:
        _emit_csv(("label", "m_gamma_inv_cm", "m_ph_g", "source"), rows, args.out)
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="procab",
        description="Screened-solenoid fields, quantum phase corrections, "
                    "and photon-mass bounds (Gaussian-cgs units)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="photon-mass unit conversions")
    p.add_argument("--inv-cm", type=float, help="range m_gamma^-1 in cm")
    p.add_argument("--grams", type=float, help="rest mass in g")
    p.add_argument("--delta-t-years", type=float,
                   help="uncertainty-principle mass for this time span")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("field", help="radial field profile CSV")
    p.add_argument("--a", type=float, required=True, help="solenoid radius, cm")
    p.add_argument("--j", type=float, required=True, help="interior field, gauss")
    p.add_argument("--m", type=float, required=True, help="m_gamma, 1/cm (0 = massless)")
    p.add_argument("--rho-min", type=float, default=None)
    p.add_argument("--rho-max", type=float, required=True)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--oracle", action="store_true",
                   help="use the finite-difference oracle instead of closed forms")
    p.add_argument("--out")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("phase", help="phase + mass correction for a config")
    p.add_argument("--config", required=True)
    p.add_argument("--m-inv-cm", type=float, default=None,
                   help="override m_gamma^-1 (cm)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("bound", help="invert precision into a photon-mass bound")
    p.add_argument("--config", required=True)
    p.add_argument("--csv", help="also write the bound rows as CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("deflect", help="leakage-field beam deflection report")
    p.add_argument("--config", required=True)
    p.add_argument("--m-inv-cm", type=float, default=None)
    p.add_argument("--energy-kev", type=float, default=deflection_mod.DEFAULT_BEAM_KEV)
    p.add_argument("--detector-cm", type=float, default=deflection_mod.DEFAULT_DETECTOR_CM)
    p.add_argument("--slit-cm", type=float, default=deflection_mod.DEFAULT_SLIT_CM)
    p.add_argument("--half-length", type=float,
                   default=deflection_mod.DEFAULT_HALF_LENGTH_CM,
                   help="path half-length when the config gives only rho_cm")
    p.add_argument("--out")
    p.set_defaults(func=cmd_deflect)

    p = sub.add_parser("sweep", help="emit one row per swept parameter value")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("refs", help="catalogued published bounds")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_refs)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
