import json

import pytest

from ncqm.cli import main
from ncqm.config import ConfigError, RunConfig, parse_config, read_config_file
from ncqm.suites import Record, Report, compare_baseline, load_baseline, run_suite


# --- configuration ----------------------------------------------------------

def test_defaults():
    cfg = parse_config()
    assert (cfg.m, cfg.lam, cfg.n, cfg.l) == (1.0, 0.5, 128, 10.0)
    assert (cfg.phase_n, cfg.phase_l, cfg.fast) == (24, 6.0, False)
    assert cfg == RunConfig()


def test_negative_mass_rejected(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("m = -1\n")
    with pytest.raises(ConfigError, match="m must be positive"):
        parse_config(path)


def test_theta_flag_sets_lambda():
    cfg = parse_config(flags={"theta": 0.3, "m": 2.0})
    assert cfg.lam == pytest.approx(1.2)
    assert cfg.theta == pytest.approx(0.3)


def test_theta_uses_final_mass(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("theta = 0.3\n")
    assert parse_config(path, {"m": 2.0}).lam == pytest.approx(1.2)


def test_flags_override_file(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# comment\nm = 2\n\nlambda = 0.8   # trailing\ngrid_n = 64\n")
    cfg = parse_config(path, {"m": 3.0, "theta": 0.1})
    assert cfg.m == 3.0 and cfg.n == 64
    assert cfg.lam == pytest.approx(0.9)          # flag theta replaces file lambda


@pytest.mark.parametrize("text,match", [
    ("mass = 1\n", "unknown key"),
    ("m 1\n", "key = value"),
    ("n = 100\n", "power of two"),
    ("m =\n", "empty value"),
    ("n = abc\n", "bad value"),
    ("lambda = 0.5\ntheta = 0.5\n", "not both"),
    ("fast = maybe\n", "bad value for 'fast'"),
])
def test_malformed_files(tmp_path, text, match):
    path = tmp_path / "c.txt"
    path.write_text(text)
    with pytest.raises(ConfigError, match=match):
        parse_config(path)


def test_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        read_config_file("/nonexistent/ncqm.cfg")


def test_unknown_suite_and_zero_theta():
    with pytest.raises(ConfigError, match="unknown suite"):
        parse_config(flags={"suite": "everything"})
    with pytest.raises(ConfigError, match="wigner"):
        parse_config(flags={"lambda": 0.0, "suite": "wigner"})
    assert parse_config(flags={"lambda": 0.0, "suite": "group"}).lam == 0.0


# --- reports ----------------------------------------------------------------

def _lines(path):
    return [json.loads(x) for x in path.read_text().splitlines()]


def test_run_group_all_pass(tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(["run", "group", "--out", str(out)]) == 0
    header, *records = _lines(out)
    assert header["suite"] == "group" and header["pass"]
    assert header["n_records"] == len(records)
    for r in records:
        assert set(r) == {"id", "paper_ref", "measured", "expected", "tolerance", "pass"}
        assert r["paper_ref"]
        assert r["pass"]


def test_reports_are_deterministic_except_timestamp(tmp_path):
    out = tmp_path / "r.jsonl"
    runs = []
    for _ in range(2):
        assert main(["run", "matrix", "--seed", "3", "--out", str(out)]) == 0
        runs.append(out.read_text().splitlines())
    a, b = runs
    assert a[1:] == b[1:]
    ha, hb = json.loads(a[0]), json.loads(b[0])
    ha.pop("timestamp"), hb.pop("timestamp")
    assert ha == hb


def test_seed_changes_samples(tmp_path):
    a, b = (run_suite("group", parse_config(flags={"seed": s})) for s in (1, 2))
    key = "c2.witness.xi-xi_prime.magnitude"
    assert ({r.id: r.measured for r in a.records}[key]
            != {r.id: r.measured for r in b.records}[key])


def test_exit_codes(tmp_path, capsys):
    assert main(["run", "group", "--m", "-1"]) == 2
    assert "m must be positive" in capsys.readouterr().err
    assert main(["run", "group", "--grid-n", "100"]) == 2
    assert main(["run", "nonsense"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["run", "group", "--bogus-flag"])
    assert e.value.code == 2


def test_failing_record_gives_exit_one(monkeypatch, tmp_path):
    import ncqm.suites as suites

    def failing(ctx):
        ctx.report.below("x.fail", "plumbing", 1.0, 0.5)
    monkeypatch.setitem(suites.SUITE_FUNCS, "group", failing)
    assert main(["run", "group", "--out", str(tmp_path / "r.jsonl")]) == 1


def test_stdout_report(capsys):
    assert main(["run", "coadjoint"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert json.loads(out[0])["suite"] == "coadjoint"


def test_dump_states(tmp_path):
    from ncqm.hilbert_grid import GridFunction
    d = tmp_path / "dumps"
    assert main(["run", "rep", "--dump-states", str(d), "--out", str(tmp_path / "r.jsonl")]) == 0
    files = sorted(d.iterdir())
    assert files and all(f.suffix == ".bin" for f in files)
    assert GridFunction.load(files[0]).spec.n == 128


# --- baseline comparison ------------------------------------------------------

def test_stored_baseline_matches_default_config():
    base = load_baseline()
    assert base["config"]["n"] == 128 and base["config"]["phase_n"] == 24
    assert any(k.startswith("c9.comm.q1q2") for k in base["values"])


def test_compare_baseline_tolerance():
    cfg = parse_config(flags={"fast": True})
    rep = Report("x", cfg)
    rep.add(Record("q", "ref", 1.0005, 1.0, 0.01, True, quantity=True))
    rep.add(Record("r", "ref", 2.01, 2.0, 0.01, True, quantity=True))
    from ncqm.suites import baseline_key
    compare_baseline(rep, {"config": baseline_key(cfg), "values": {"q": 1.0, "r": 2.0}})
    by_id = {r.id: r.passed for r in rep.records}
    assert by_id["baseline.q"] and not by_id["baseline.r"]


def test_compare_baseline_other_config_is_skipped():
    rep = Report("x", parse_config(flags={"fast": True, "m": 2.0}))
    compare_baseline(rep, load_baseline())
    assert rep.records[-1].id == "baseline.available" and rep.records[-1].passed


def test_fast_quantize_within_baseline():
    rep = run_suite("quantize", parse_config(flags={"fast": True}))
    checks = [r for r in rep.records if r.id.startswith("baseline.")]
    assert len(checks) >= 18
    assert all(r.passed for r in checks)
