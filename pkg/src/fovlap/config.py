"""INI-style run configuration with the CloudCT case-study defaults.

Example::

    [formation]
    h_orbit_km = 500
    arc_spacing_km = 100
    n_cam = 10
    footprint_x_km = 100
    footprint_y_km = 70

    [ensemble]
    n_mc = 2000
    seed = 7
    ape_deg = 2.0
    t_threshold = 0.8

    [sweep]
    axis = ape
    values = 0.1:3.0:0.1
    q = 5..10
"""
import configparser
import math
import secrets
from dataclasses import dataclass, field, replace

from .camera import CameraIntrinsics, anchor_footprint_dims
from .errors import ConfigInvalid, ConfigParse
from .formation import FormationConfig
from .geometry import NoiseModel
from .graph import ANGULAR, BASELINE, ConnectivityCriteria
from .montecarlo import EnsembleConfig

AXES = ("ape", "fov", "q", "t")
DEFAULT_APE_GRID = (0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)

KNOWN_KEYS = {
    "formation": {"h_earth_km", "h_orbit_km", "arc_spacing_km", "n_cam",
                  "footprint_x_km", "footprint_y_km", "fov_x_deg", "fov_y_deg"},
    "ensemble": {"n_mc", "seed", "ape_deg", "t_threshold", "similarity_mode",
                 "d_max_km", "mu_max_deg", "require_anchor_in_component"},
    "sweep": {"axis", "values", "q"},
}


@dataclass(frozen=True)
class SweepSpec:
    axis: str = "ape"
    values: tuple = DEFAULT_APE_GRID
    q_values: tuple = ()
    seed_drawn: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigInvalid("sweep.axis", f"must be one of {AXES}, got {self.axis!r}")
        if not self.values:
            raise ConfigInvalid("sweep.values", "must be nonempty")
        keys = [fov_sort_key(v) if self.axis == "fov" else v for v in self.values]
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise ConfigInvalid("sweep.values", "must be strictly increasing")


def fov_sort_key(value):
    w_x, w_y = value
    return w_x * w_y


def parse_range(text, integer=False):
    """Parse ``a:b:step`` (inclusive), ``a..b`` (integers) or a comma list."""
    text = text.strip()
    conv = int if integer else float
    if ".." in text and ":" not in text:
        lo, hi = (int(s) for s in text.split(".."))
        return tuple(range(lo, hi + 1))
    if ":" in text:
        parts = [float(s) for s in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"bad range {text!r}; expected start:stop:step")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        vals = [round(start + i * step, 12) for i in range(n)]
        return tuple(conv(v) for v in vals)
    return tuple(conv(s) for s in text.replace(";", ",").split(",") if s.strip())


def parse_fov_values(text):
    out = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            continue
        if "x" in item:
            a, b = item.split("x")
            out.append((float(a), float(b)))
        else:
            out.append((float(item), float(item)))
    return tuple(out)


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _get(raw, section, key, conv, default):
    text = raw.get(section, {}).get(key)
    if text is None or text.strip() == "":
        return default
    try:
        return conv(text)
    except ValueError as exc:
        raise ConfigInvalid(f"{section}.{key}", str(exc)) from None


def read_raw(path=None, text=None):
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        if text is not None:
            parser.read_string(text)
        elif path is not None:
            with open(path) as fh:
                parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigParse(str(exc)) from None
    raw = {}
    for section in parser.sections():
        if section not in KNOWN_KEYS:
            raise ConfigParse(f"unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in KNOWN_KEYS[section]:
                raise ConfigParse(f"unknown key {section}.{key}")
            raw.setdefault(section, {})[key] = value
    return raw


def resolve(raw):
    """Validated (FormationConfig, EnsembleConfig, SweepSpec) from raw strings."""
    h_earth = _get(raw, "formation", "h_earth_km", float, 6371.0)
    h_orbit = _get(raw, "formation", "h_orbit_km", float, 500.0)
    spacing = _get(raw, "formation", "arc_spacing_km", float, 100.0)
    n_cam = _get(raw, "formation", "n_cam", int, 10)
    for name, val in (("h_earth_km", h_earth), ("h_orbit_km", h_orbit),
                      ("arc_spacing_km", spacing)):
        if not val > 0:
            raise ConfigInvalid(f"formation.{name}", "must be positive")
    if n_cam < 2:
        raise ConfigInvalid("formation.n_cam", "must be >= 2")

    fov_x = _get(raw, "formation", "fov_x_deg", float, None)
    fov_y = _get(raw, "formation", "fov_y_deg", float, None)
    try:
        if fov_x is not None or fov_y is not None:
            if fov_x is None or fov_y is None:
                raise ConfigInvalid("formation.fov_x_deg", "give both fov_x_deg and fov_y_deg")
            intr = CameraIntrinsics(fov_x, fov_y)
        else:
            w_x = _get(raw, "formation", "footprint_x_km", float, 100.0)
            w_y = _get(raw, "formation", "footprint_y_km", float, 70.0)
            if not (w_x > 0 and w_y > 0):
                raise ConfigInvalid("formation.footprint_x_km", "footprint must be positive")
            intr = CameraIntrinsics.from_footprint(w_x, w_y, h_orbit)
    except ValueError as exc:
        raise ConfigInvalid("formation.fov", str(exc)) from None
    formation = FormationConfig(h_earth, h_orbit, spacing, n_cam, intr)

    n_mc = _get(raw, "ensemble", "n_mc", int, 100)
    if n_mc < 1:
        raise ConfigInvalid("ensemble.n_mc", "must be >= 1")
    seed = _get(raw, "ensemble", "seed", int, None)
    seed_drawn = seed is None
    if seed_drawn:
        seed = secrets.randbits(63)
    if not 0 <= seed < 2 ** 64:
        raise ConfigInvalid("ensemble.seed", "must be a 64-bit unsigned integer")
    ape = _get(raw, "ensemble", "ape_deg", float, 2.0)
    if not ape >= 0:
        raise ConfigInvalid("ensemble.ape_deg", "must be >= 0")
    t = _get(raw, "ensemble", "t_threshold", float, 0.8)
    if not 0.0 <= t <= 1.0:
        raise ConfigInvalid("ensemble.t_threshold", f"must be in [0, 1], got {t}")
    mode = _get(raw, "ensemble", "similarity_mode", str.strip, BASELINE)
    if mode not in (ANGULAR, BASELINE):
        raise ConfigInvalid("ensemble.similarity_mode", f"must be {ANGULAR} or {BASELINE}")
    d_max = _get(raw, "ensemble", "d_max_km", float, 200.0 if mode == BASELINE else None)
    mu_max = _get(raw, "ensemble", "mu_max_deg", float, None)
    if mode == ANGULAR and mu_max is None:
        raise ConfigInvalid("ensemble.mu_max_deg", "required in angular mode")
    if mode == BASELINE and not d_max > 0:
        raise ConfigInvalid("ensemble.d_max_km", "must be positive")
    anchor_comp = _get(raw, "ensemble", "require_anchor_in_component", _bool, False)
    criteria = ConnectivityCriteria(
        t, mode,
        mu_max if mode == ANGULAR else None,
        d_max if mode == BASELINE else None,
        anchor_comp)
    ensemble = EnsembleConfig(n_mc, seed, NoiseModel(ape), criteria)

    axis = _get(raw, "sweep", "axis", str.strip, "ape")
    if axis not in AXES:
        raise ConfigInvalid("sweep.axis", f"must be one of {AXES}, got {axis!r}")
    if axis == "fov":
        default = (anchor_footprint_dims(intr, h_orbit),)
        values = _get(raw, "sweep", "values", parse_fov_values, default)
    elif axis == "q":
        values = _get(raw, "sweep", "values", lambda s: parse_range(s, integer=True),
                      tuple(range(max(1, n_cam - 5), n_cam + 1)))
    elif axis == "t":
        values = _get(raw, "sweep", "values", parse_range, (t,))
    else:
        values = _get(raw, "sweep", "values", parse_range, DEFAULT_APE_GRID)
    q_values = _get(raw, "sweep", "q", lambda s: parse_range(s, integer=True), (n_cam,))
    for q in (values if axis == "q" else q_values):
        if not 1 <= q <= n_cam:
            raise ConfigInvalid("sweep.q" if axis != "q" else "sweep.values",
                                f"Q={q} outside 1..{n_cam}")
    if axis == "t" and any(not 0.0 <= v <= 1.0 for v in values):
        raise ConfigInvalid("sweep.values", "thresholds must lie in [0, 1]")
    if axis == "ape" and any(v < 0 for v in values):
        raise ConfigInvalid("sweep.values", "APE values must be >= 0")
    if axis == "fov" and any(not 0 < wy <= wx for wx, wy in values):
        raise ConfigInvalid("sweep.values", "footprints need 0 < W_y <= W_x")
    sweep = SweepSpec(axis, tuple(values), tuple(q_values), seed_drawn)
    return formation, ensemble, sweep


def load_config(path=None, overrides=None, text=None):
    """Read a config file (optional) and apply ``{"section.key": "value"}`` overrides."""
    raw = read_raw(path, text)
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        section, key = dotted.split(".", 1)
        raw.setdefault(section, {})[key] = str(value)
    return resolve(raw)


def with_ape(ensemble, ape_deg):
    return replace(ensemble, noise=NoiseModel(ape_deg))


def with_threshold(ensemble, t):
    return replace(ensemble, criteria=replace(ensemble.criteria, t_threshold=t))


def with_footprint(formation, w_x, w_y):
    intr = CameraIntrinsics.from_footprint(w_x, w_y, formation.h_orbit_km)
    return replace(formation, intrinsics=intr)


def describe(formation, ensemble, sweep):
    """Flat dict of the resolved configuration, for provenance headers."""
    w_x, w_y = anchor_footprint_dims(formation.intrinsics, formation.h_orbit_km)
    crit = ensemble.criteria
    d = {
        "formation.h_earth_km": formation.h_earth_km,
        "formation.h_orbit_km": formation.h_orbit_km,
        "formation.arc_spacing_km": formation.arc_spacing_km,
        "formation.n_cam": formation.n_cam,
        "formation.fov_x_deg": formation.intrinsics.phi_x_deg,
        "formation.fov_y_deg": formation.intrinsics.phi_y_deg,
        "formation.footprint_x_km": w_x,
        "formation.footprint_y_km": w_y,
        "ensemble.n_mc": ensemble.n_mc,
        "ensemble.seed": ensemble.master_seed,
        "ensemble.ape_deg": ensemble.noise.ape_deg,
        "ensemble.t_threshold": crit.t_threshold,
        "ensemble.similarity_mode": crit.similarity_mode,
        "ensemble.d_max_km": crit.d_max_km,
        "ensemble.mu_max_deg": crit.mu_max_deg,
        "ensemble.require_anchor_in_component": crit.require_anchor_in_component,
        "ensemble.anchor_miss_samples": "included (RO=0)",
        "sweep.axis": sweep.axis,
        "sweep.values": [list(v) if isinstance(v, tuple) else v for v in sweep.values],
        "sweep.q": list(sweep.q_values),
    }
    return d
