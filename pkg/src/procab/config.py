"""Experiment-description files: flat `key = value` text, fully validated.

Line-oriented, `#` starts a comment, keys are case-sensitive, and the unit
of every quantity is fixed by its key name (`a_cm`, `j_gauss`, ...).  All
validation happens before any computation: unknown keys, duplicate keys and
missing required keys are hard errors carrying the line number.  epsilon
defaults to the canonical measurement precision 1e-3; every other physics
input must be explicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

from .errors import ConfigError

__all__ = ["ExperimentConfig", "SweepSpec", "parse_config", "load_config"]

EFFECTS = ("ab_closed", "tkachuk", "pm_q")

# key -> parser; every key not listed here is unknown
_FLOAT_KEYS = (
    "a_cm", "j_gauss", "length_cm", "rho_cm", "x_cm", "y_cm",
    "q_statc", "d_statc_cm", "l_cm", "mu_bar_gauss_cm",
    "epsilon", "m_gamma_inv_cm",
)
_STRING_KEYS = ("effect",)
_SWEEP_KEY = "sweep"

_REQUIRED = {
    "ab_closed": ("a_cm", "j_gauss", "rho_cm", "q_statc"),
    "tkachuk": ("a_cm", "j_gauss", "rho_cm", "d_statc_cm", "l_cm"),
    "pm_q": ("a_cm", "j_gauss", "x_cm", "y_cm", "q_statc"),
}

DEFAULT_EPSILON = 1e-3

# parameters a sweep may vary; epsilon sweeps emit bound rows, the rest
# emit phase rows and require a resolvable mass
SWEEPABLE = ("m_gamma_inv_cm", "epsilon", "a_cm", "j_gauss", "rho_cm",
             "x_cm", "y_cm", "d_statc_cm", "l_cm", "q_statc")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    lo: float
    hi: float
    steps: int
    spacing: str = "lin"   # lin | log

    def values(self):
        import numpy as np
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.steps)
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class ExperimentConfig:
    effect: str
    values: dict = dataclass_field(default_factory=dict)
    sweep: SweepSpec | None = None

    def get(self, key, default=None):
        return self.values.get(key, default)

    def __getitem__(self, key):
        return self.values[key]

    @property
    def epsilon(self):
        return self.values.get("epsilon", DEFAULT_EPSILON)

    def to_json_dict(self):
        inputs = {"effect": self.effect, **self.values}
        if "epsilon" not in inputs:
            inputs["epsilon"] = DEFAULT_EPSILON
        if self.sweep is not None:
            inputs["sweep"] = {
                "parameter": self.sweep.parameter,
                "lo": self.sweep.lo,
                "hi": self.sweep.hi,
                "steps": self.sweep.steps,
                "spacing": self.sweep.spacing,
            }
        return inputs


def _parse_sweep(raw, line_no):
    tokens = raw.split()
    if len(tokens) not in (4, 5):
        raise ConfigError(
            "sweep needs `<parameter> <lo> <hi> <steps>` with optional "
            "`log`/`lin`", line=line_no, key="sweep",
        )
    param = tokens[0]
    if param not in SWEEPABLE:
        raise ConfigError(f"parameter {param!r} is not sweepable "
                          f"(choose from {', '.join(SWEEPABLE)})",
                          line=line_no, key="sweep")
    try:
        lo, hi = float(tokens[1]), float(tokens[2])
        steps = int(tokens[3])
    except ValueError as exc:
        raise ConfigError(f"bad sweep numbers: {exc}", line=line_no, key="sweep")
    spacing = tokens[4] if len(tokens) == 5 else "lin"
    if spacing not in ("lin", "log"):
        raise ConfigError("sweep spacing must be `lin` or `log`",
                          line=line_no, key="sweep")
    if steps < 1:
        raise ConfigError("sweep needs at least 1 step", line=line_no, key="sweep")
    if spacing == "log" and not (lo > 0.0 and hi > 0.0):
        raise ConfigError("log sweep needs positive endpoints",
                          line=line_no, key="sweep")
    return SweepSpec(parameter=param, lo=lo, hi=hi, steps=steps, spacing=spacing)


def parse_config(text) -> ExperimentConfig:
    """Parse and fully validate an experiment description."""
    seen_lines = {}
    values = {}
    effect = None
    sweep = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected `key = value`", line=line_no)
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key in seen_lines:
            raise ConfigError(
                f"duplicate key (first seen on line {seen_lines[key]})",
                line=line_no, key=key,
            )
        seen_lines[key] = line_no
        if key == "effect":
            if raw not in EFFECTS:
                raise ConfigError(f"unknown effect {raw!r} "
                                  f"(choose from {', '.join(EFFECTS)})",
                                  line=line_no, key=key)
            effect = raw
        elif key == _SWEEP_KEY:
            sweep = _parse_sweep(raw, line_no)
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(raw)
            except ValueError:
                raise ConfigError(f"expected a number, got {raw!r}",
                                  line=line_no, key=key)
        else:
            raise ConfigError("unknown key", line=line_no, key=key)

    if effect is None:
        raise ConfigError("missing required key", key="effect")
    missing = [k for k in _REQUIRED[effect]
               if k not in values and not (sweep and sweep.parameter == k)]
    if missing:
        raise ConfigError(
            f"effect {effect!r} requires key(s): {', '.join(missing)}",
            key=missing[0],
        )
    _validate_values(effect, values)
    return ExperimentConfig(effect=effect, values=values, sweep=sweep)


def _validate_values(effect, values):
    positive = ("a_cm", "j_gauss", "length_cm", "rho_cm", "x_cm", "y_cm",
                "q_statc", "d_statc_cm", "l_cm", "m_gamma_inv_cm")
    for key in positive:
        if key in values and not values[key] > 0.0:
            raise ConfigError("value must be > 0", key=key)
    if "epsilon" in values and not (0.0 < values["epsilon"] < 1.0):
        raise ConfigError("epsilon must be in (0, 1)", key="epsilon")
    if "rho_cm" in values and "a_cm" in values and effect != "pm_q":
        if values["rho_cm"] <= values["a_cm"]:
            raise ConfigError("loop must enclose the solenoid (rho_cm > a_cm)",
                              key="rho_cm")
    if effect == "pm_q" and "y_cm" in values and "a_cm" in values:
        if values["y_cm"] <= values["a_cm"]:
            raise ConfigError("path must pass outside the solenoid (y_cm > a_cm)",
                              key="y_cm")


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read())
