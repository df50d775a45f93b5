"""CSV / JSON emission of sweep results, plus readers for round-tripping.

CSV layout: ``#``-prefixed provenance lines (``# key = value``), then a
header row and one line per swept value. Floats carry 9 significant digits.
"""
import csv
import io
import json
from importlib import resources

from .sweep import AXIS_COLUMN, ResultRow

SCHEMA_VERSION = 1


def fmt(x):
    return f"{x:.9g}"


def round9(x):
    return float(fmt(x))


def format_value(axis, value):
    if axis == "fov":
        return f"{fmt(value[0])}x{fmt(value[1])}"
    if axis == "q":
        return str(int(value))
    return fmt(value)


def parse_value(axis, text):
    if axis == "fov":
        a, b = text.split("x")
        return (float(a), float(b))
    if axis == "q":
        return int(text)
    return float(text)


def csv_header(rows):
    axis = rows[0].axis
    if axis == "q":
        pcols = ["p_calib"]
    else:
        pcols = [f"p_calib_q{q}" for q in rows[0].p_calib]
    return ([AXIS_COLUMN[axis], "mean_ao_km2", "mean_ro", "std_ro"] + pcols
            + ["miss_count", "n_mc", "seed"])


def _config_value(v):
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, list):
        return ",".join(_config_value(x) for x in v)
    if isinstance(v, tuple):
        return "x".join(_config_value(x) for x in v)
    return str(v)


def to_csv(rows, config):
    buf = io.StringIO()
    buf.write(f"# fovlap results, schema_version = {SCHEMA_VERSION}\n")
    for key, value in config.items():
        buf.write(f"# {key} = {_config_value(value)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(rows))
    for r in rows:
        w.writerow([format_value(r.axis, r.value), fmt(r.mean_ao), fmt(r.mean_ro),
                    fmt(r.std_ro)] + [fmt(p) for p in r.p_calib.values()]
                   + [r.miss_count, r.n_mc, r.seed])
    return buf.getvalue()


def _json_config(config):
    out = {}
    for k, v in config.items():
        if isinstance(v, float):
            v = round9(v)
        elif isinstance(v, list):
            v = [round9(x) if isinstance(x, float) else x for x in v]
        out[k] = v
    return out


def to_json(rows, config):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": _json_config(config),
        "rows": [{
            "axis": r.axis,
            "value": ([round9(x) for x in r.value] if r.axis == "fov"
                      else int(r.value) if r.axis == "q" else round9(r.value)),
            "mean_ao_km2": round9(r.mean_ao),
            "mean_ro": round9(r.mean_ro),
            "std_ro": round9(r.std_ro),
            "p_calib": {str(q): round9(p) for q, p in r.p_calib.items()},
            "miss_count": r.miss_count,
            "n_mc": r.n_mc,
            "seed": r.seed,
        } for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def emit(rows, format, path, config):
    """Write ``rows`` as csv or json to ``path`` ("-" for stdout)."""
    if not rows:
        raise ValueError("no rows to emit")
    if format == "csv":
        text = to_csv(rows, config)
    elif format == "json":
        text = to_json(rows, config)
    else:
        raise ValueError(f"unknown format {format!r}")
    if path in (None, "-"):
        return text
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def load_schema():
    ref = resources.files("fovlap").joinpath("data/results.schema.json")
    return json.loads(ref.read_text())


def read_csv(text):
    """Parse emitted CSV text back into (config strings, rows)."""
    config = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            if " = " in line:
                k, v = line[1:].split(" = ", 1)
                config[k.strip()] = v.strip()
        elif line:
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    axis = {v: k for k, v in AXIS_COLUMN.items()}[header[0]]
    rows = []
    for rec in reader:
        d = dict(zip(header, rec))
        value = parse_value(axis, d[header[0]])
        if axis == "q":
            pc = {value: float(d["p_calib"])}
        else:
            pc = {int(k[len("p_calib_q"):]): float(v) for k, v in d.items()
                  if k.startswith("p_calib_q")}
        rows.append(ResultRow(axis, value, float(d["mean_ao_km2"]), float(d["mean_ro"]),
                              float(d["std_ro"]), pc, int(d["miss_count"]),
                              int(d["n_mc"]), int(d["seed"])))
    return config, rows


def read_json(text):
    doc = json.loads(text)
    rows = []
    for d in doc["rows"]:
        value = tuple(d["value"]) if d["axis"] == "fov" else d["value"]
        rows.append(ResultRow(d["axis"], value, d["mean_ao_km2"], d["mean_ro"], d["std_ro"],
                              {int(q): p for q, p in d["p_calib"].items()},
                              d["miss_count"], d["n_mc"], d["seed"]))
    return doc["config"], rows
