import json

import jsonschema
import pytest

from fovlap import cli
from fovlap.config import load_config, parse_range
from fovlap.errors import ConfigInvalid, ConfigParse
from fovlap.formation import FormationConfig
from fovlap.report import emit, load_schema, read_csv, read_json, round9
from fovlap.sweep import ResultRow, run_sweep


def test_empty_config_gives_case_study_defaults():
    formation, ensemble, sweep = load_config(text="")
    assert formation.h_orbit_km == 500.0
    assert formation.arc_spacing_km == 100.0
    assert formation.n_cam == 10
    assert ensemble.criteria.t_threshold == 0.8
    assert ensemble.criteria.d_max_km == 200.0
    assert ensemble.n_mc == 100
    assert sweep.q_values == (10,)
    assert sweep.seed_drawn
    assert formation.intrinsics == FormationConfig().intrinsics


def test_ape_list_and_ranges():
    _, _, sweep = load_config(text="[sweep]\nvalues = 0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0\n")
    assert len(sweep.values) == 7
    assert parse_range("0.1:3.0:0.1") == tuple(round(0.1 * k, 12) for k in range(1, 31))
    assert parse_range("5..10", integer=True) == (5, 6, 7, 8, 9, 10)


@pytest.mark.parametrize("text, field", [
    ("[ensemble]\nt_threshold = 1.5\n", "ensemble.t_threshold"),
    ("[ensemble]\nn_mc = 0\n", "ensemble.n_mc"),
    ("[ensemble]\nape_deg = -1\n", "ensemble.ape_deg"),
    ("[formation]\nn_cam = 1\n", "formation.n_cam"),
    ("[sweep]\nvalues = 2, 1\n", "sweep.values"),
    ("[sweep]\nq = 11\n", "sweep.q"),
    ("[ensemble]\nsimilarity_mode = angular\n", "ensemble.mu_max_deg"),
])
def test_invalid_values_name_the_field(text, field):
    with pytest.raises(ConfigInvalid) as exc:
        load_config(text=text)
    assert exc.value.field == field
    assert field in str(exc.value)


def test_malformed_config():
    with pytest.raises(ConfigParse):
        load_config(text="this is not ini")
    with pytest.raises(ConfigParse):
        load_config(text="[formation]\nbogus = 1\n")


def test_flags_override_file(tmp_path):
    p = tmp_path / "run.ini"
    p.write_text("[ensemble]\nseed = 5\nn_mc = 30\n")
    _, ens, _ = load_config(p, {"ensemble.seed": 9})
    assert ens.master_seed == 9 and ens.n_mc == 30


def small_rows():
    formation, ensemble, sweep = load_config(
        text="[ensemble]\nseed = 3\nn_mc = 20\n[sweep]\nvalues = 0.5, 2.0\nq = 7, 10\n")
    return run_sweep(formation, ensemble, sweep), (formation, ensemble, sweep)


def test_csv_round_trip_and_header():
    from fovlap.config import describe
    rows, cfgs = small_rows()
    text = emit(rows, "csv", None, describe(*cfgs))
    header = [l for l in text.splitlines() if not l.startswith("#")][0]
    assert header == "ape_deg,mean_ao_km2,mean_ro,std_ro,p_calib_q7,p_calib_q10,miss_count,n_mc,seed"
    config, back = read_csv(text)
    assert config["ensemble.seed"] == "3"
    for a, b in zip(rows, back):
        assert b.value == a.value
        assert b.mean_ro == round9(a.mean_ro) and b.std_ro == round9(a.std_ro)
        assert b.mean_ao == round9(a.mean_ao)
        assert b.p_calib == {q: round9(p) for q, p in a.p_calib.items()}
        assert (b.miss_count, b.n_mc, b.seed) == (a.miss_count, a.n_mc, a.seed)


def test_json_round_trip_and_schema():
    from fovlap.config import describe
    rows, cfgs = small_rows()
    text = emit(rows, "json", None, describe(*cfgs))
    doc = json.loads(text)
    jsonschema.validate(doc, load_schema())
    config, back = read_json(text)
    assert config["ensemble.seed"] == 3
    for a, b in zip(rows, back):
        assert b.mean_ro == round9(a.mean_ro)
        assert b.p_calib == {q: round9(p) for q, p in a.p_calib.items()}


def test_q_sweep_is_exact_tail_sum():
    formation, ensemble, sweep = load_config(
        text="[ensemble]\nseed = 1\nn_mc = 60\nape_deg = 2\n[sweep]\naxis = q\nvalues = 5..10\n")
    rows = run_sweep(formation, ensemble, sweep)
    ps = [r.p_calib[r.value] for r in rows]
    assert all(b <= a for a, b in zip(ps, ps[1:]))
    assert len({r.mean_ro for r in rows}) == 1


def test_fov_and_t_sweeps():
    formation, ensemble, sweep = load_config(
        text="[ensemble]\nseed = 1\nn_mc = 40\n[sweep]\naxis = fov\nvalues = 40x40, 100x70\n")
    rows = run_sweep(formation, ensemble, sweep)
    assert [r.value for r in rows] == [(40.0, 40.0), (100.0, 70.0)]
    formation, ensemble, sweep = load_config(
        text="[ensemble]\nseed = 1\nn_mc = 20\n[sweep]\naxis = t\nvalues = 0.5, 0.9\n")
    assert len(run_sweep(formation, ensemble, sweep)) == 2


def test_emit_rejects_empty():
    with pytest.raises(ValueError):
        emit([], "csv", None, {})


def test_cli_sweep_writes_file(tmp_path):
    out = tmp_path / "r.csv"
    code = cli.main(["sweep", "--seed", "4", "--n-mc", "10", "--values", "1,2",
                     "--threads", "1", "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out.read_text())
    assert [r.value for r in rows] == [1.0, 2.0]
    for r in rows:
        assert 0 <= r.mean_ro <= 1 and all(0 <= p <= 1 for p in r.p_calib.values())


def test_cli_json_validates(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["sweep", "--seed", "4", "--n-mc", "10", "--values", "1",
                     "--format", "json", "--threads", "1", "--out", str(out)]) == 0
    jsonschema.validate(json.loads(out.read_text()), load_schema())


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["sweep", "--threshold", "1.5"]) == 2
    assert "t_threshold" in capsys.readouterr().err
    bad = tmp_path / "bad.ini"
    bad.write_text("garbage")
    assert cli.main(["sweep", "--config", str(bad)]) == 2
    assert cli.main(["sweep", "--config", str(tmp_path / "missing.ini")]) == 2
    assert cli.main(["sweep", "--seed", "1", "--n-mc", "5", "--values", "1",
                     "--out", str(tmp_path / "nodir" / "x.csv"), "--threads", "1"]) == 3


def test_cli_dry_run(capsys):
    assert cli.main(["sweep", "--dry-run", "--seed", "8"]) == 0
    out = capsys.readouterr().out
    assert "formation.h_orbit_km = 500.0" in out
    assert "ensemble.seed = 8" in out


def test_cli_prints_drawn_seed(capsys):
    assert cli.main(["sweep", "--dry-run"]) == 0
    assert "seed =" in capsys.readouterr().err


def test_cli_once(tmp_path, capsys):
    out = tmp_path / "once.csv"
    assert cli.main(["once", "--seed", "2", "--n-mc", "8", "--ape", "2", "--threads", "1",
                     "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("sample_index,ao_km2,ro")
    assert len(lines) == 9
    summary = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert summary["n_mc"] == 8


def test_cli_footprints(tmp_path):
    out = tmp_path / "fp.json"
    assert cli.main(["footprints", "--seed", "2", "--ape", "0", "--sample-index", "3",
                     "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["cameras"]) == 10
    anchor = doc["cameras"][doc["anchor_index"]]
    xs = [v[0] for v in anchor["vertices_km"]]
    assert max(xs) - min(xs) == pytest.approx(100.0)
    assert doc["overlap"]["ro"] == pytest.approx(1.0, abs=1e-3)
    assert len(doc["overlap"]["vertices_km"]) >= 3


def test_result_row_fields():
    r = ResultRow("ape", 1.0, 10.0, 0.5, 0.1, {10: 0.2}, 0, 5, 1)
    assert r.p_calib[10] == 0.2
