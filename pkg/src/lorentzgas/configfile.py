"""Strict flat key = value configuration files with section headers.

Unknown sections or keys are hard errors: a misspelled physics parameter
must never silently fall back to a default.
"""

from __future__ import annotations

import configparser
import math
from fractions import Fraction

import numpy as np

from .errors import ConfigError

__all__ = ["parse_config_file", "parse_alpha", "GOLDEN_FRACTION"]

GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0

_SCHEMA = {
    "lattice": {"d", "radius", "alpha", "alpha_class", "rational_q", "basis"},
    "ensemble": {"kind", "base_point", "xi_cap"},
    "run": {
        "samples",
        "seed",
        "workers",
        "stream_chunk",
        "out_samples",
        "out_summary",
    },
    "ladder": {"radii"},
}


def parse_alpha(text: str, d: int):
    """Shift vector from a config token.

    Accepts 'golden' (the golden-mean vector, irrational), fraction forms
    like '1/3' or '1/3, 2/3' (rational, denominator recorded), plain floats
    (classified integer when all entries are integral, irrational
    otherwise), broadcast to dimension d when a single value is given.

    Returns (alpha, alpha_class, rational_q).
    """
    text = text.strip()
    if text == "golden":
        return np.full(d, GOLDEN_FRACTION), "irrational", None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        parts = parts * d
    if len(parts) != len(parts[:d]) or len(parts) != d:
        raise ConfigError(f"alpha needs 1 or {d} components, got {len(parts)}")
    if any("/" in p for p in parts):
        fracs = []
        for p in parts:
            try:
                fracs.append(Fraction(p))
            except ValueError as exc:
                raise ConfigError(f"bad alpha component {p!r}: {exc}") from None
        q = 1
        for f in fracs:
            q = q * f.denominator // math.gcd(q, f.denominator)
        alpha = np.array([float(f) for f in fracs])
        if q == 1:
            return alpha, "integer", None
        return alpha, "rational", q
    try:
        alpha = np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ConfigError(f"bad alpha: {exc}") from None
    if np.all(alpha == np.round(alpha)):
        return alpha, "integer", None
    return alpha, "irrational", None


def _parse_value(section, key, raw):
    raw = raw.strip()
    if raw == "":
        return None
    try:
        if key in {"d", "rational_q", "samples", "seed", "workers", "stream_chunk"}:
            return int(raw)
        if key in {"radius", "xi_cap"}:
            return float(raw)
        if key == "radii":
            values = tuple(float(p) for p in raw.split(","))
            if not values:
                raise ValueError("empty radii list")
            return values
        if key in {"base_point"}:
            return tuple(float(p) for p in raw.split(","))
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None
    return raw  # strings: alpha, alpha_class, basis, kind, paths


def parse_config_file(path) -> dict:
    """Read a config file into {section: {key: parsed value}}; strict keys."""
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#", ";"), interpolation=None
    )
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    out = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        known = _SCHEMA[section]
        out[section] = {}
        for key, raw in parser.items(section):
            if key not in known:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            value = _parse_value(section, key, raw)
            if value is not None:
                out[section][key] = value
    return out
