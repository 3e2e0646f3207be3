import json

import pytest

from qetsim.cli import main


def run_cli(*argv):
    return main(list(argv))


# --- table1 -------------------------------------------------------------------

def test_table1_row_counts_and_check(tmp_path):
    out = tmp_path / "table.csv"
    code = run_cli("table1", "--shots", "2000", "--check", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 84 + 84  # header + exact + sampled
    assert lines[0].endswith("ref_mean,ref_stderr,tolerance,status")
    assert all(line.endswith(",pass") for line in lines[1:])


def test_table1_exact_only_and_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("table1", "--method", "exact", "--out", str(a)) == 0
    assert run_cli("table1", "--method", "exact", "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 1 + 84


def test_table1_wide_layout(tmp_path):
    out = tmp_path / "wide.csv"
    assert run_cli("table1", "--method", "exact", "--wide", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("tiling,observable,method,")
    assert len(lines) == 1 + 3 * 7  # 3 tilings x 7 observables, exact only


# --- sweep ---------------------------------------------------------------------

def test_sweep_grid_rows_and_positivity(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run_cli("sweep", "--h", "0.2:2.0:10", "--k", "0.2:2.0:10",
                   "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "h,k,E_B"
    assert len(lines) == 1 + 100
    assert all(float(line.split(",")[2]) >= -1e-10 for line in lines[1:])


def test_sweep_rejects_nonpositive_grid():
    assert run_cli("sweep", "--h", "0:1:5", "--k", "1") == 2


def test_sweep_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli("sweep", "--h", "0.5:1.5:4", "--k", "0.5:1.5:4", "--out", str(a))
    run_cli("sweep", "--h", "0.5:1.5:4", "--k", "0.5:1.5:4", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


# --- tiling ----------------------------------------------------------------------

def test_tiling_hexagonal_counts(tmp_path, capsys):
    out = tmp_path / "rings.csv"
    edges = tmp_path / "edges.txt"
    assert run_cli("tiling", "--q", "6", "--depth", "4", "--out", str(out),
                   "--edges-out", str(edges)) == 0
    assert out.read_text().splitlines() == [
        "ring,count", "0,1", "1,6", "2,12", "3,18", "4,24",
    ]
    assert "Euclidean" in capsys.readouterr().err
    assert len(edges.read_text().splitlines()) > 0


def test_tiling_spherical_warns_without_generating(capsys):
    assert run_cli("tiling", "--q", "5", "--depth", "3") == 0
    err = capsys.readouterr().err
    assert "Spherical" in err
    assert "q >= 6" in err


def test_tiling_bad_q_usage_error():
    assert run_cli("tiling", "--q", "2", "--depth", "1") == 2


# --- qet / qed -------------------------------------------------------------------

def test_qet_json_record(tmp_path):
    out = tmp_path / "qet.json"
    assert run_cli("qet", "--h", "1", "--k", "1", "--method", "exact",
                   "--out", str(out)) == 0
    payload = json.loads(out.read_text())
    assert payload["E0"] == pytest.approx(0.7071067811865475, abs=1e-10)
    r = payload["receivers"]["1"]
    assert r["E_B"] == pytest.approx(-r["E_j"], abs=1e-14)


def test_qet_csv_both_methods(tmp_path):
    out = tmp_path / "qet.csv"
    assert run_cli("qet", "--h", "1", "--k", "1", "--method", "both",
                   "--shots", "2000", "--format", "csv", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "observable,site,method,mean,stderr"
    assert len(lines) == 1 + 4 + 4  # E0,HX1,HZ1,E1 for each method


def test_qed_receiver_independence_in_output(tmp_path):
    out = tmp_path / "qed.json"
    assert run_cli("qed", "--h", "7", "--k", "2", "--q", "7", "--receivers", "1,2",
                   "--method", "exact", "--out", str(out)) == 0
    payload = json.loads(out.read_text())
    assert payload["receivers"]["1"]["E_j"] == pytest.approx(
        payload["receivers"]["2"]["E_j"], abs=1e-10
    )


def test_qed_invalid_q_usage_error():
    assert run_cli("qed", "--h", "1", "--k", "1", "--q", "99") == 2


def test_qed_bad_receiver_usage_error():
    assert run_cli("qed", "--h", "1", "--k", "1", "--q", "6",
                   "--receivers", "1,9") == 2


# --- longrange --------------------------------------------------------------------

def test_longrange_artifacts(tmp_path):
    out = tmp_path / "record.json"
    tr = tmp_path / "messages.log"
    assert run_cli("longrange", "--h", "1", "--k", "1", "--hops", "2",
                   "--out", str(out), "--transcript-out", str(tr)) == 0
    payload = json.loads(out.read_text())
    assert payload["hops"] == 2
    assert payload["relay_vs_local_max_delta"] <= 1e-10
    r = payload["receivers"]["1"]
    assert r["E_B"] == pytest.approx(-r["E_j"], abs=1e-14)
    lines = tr.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2  # broadcast + two 1-bit messages per hop
    assert lines[0].endswith("mu-broadcast x")


def test_longrange_sampled_transcript(tmp_path):
    out = tmp_path / "record.json"
    tr = tmp_path / "messages.log"
    assert run_cli("longrange", "--h", "1", "--k", "1", "--hops", "3",
                   "--seed", "11", "--sample-transcript",
                   "--out", str(out), "--transcript-out", str(tr)) == 0
    text = tr.read_text()
    assert "x" not in text
    assert len(text.splitlines()) == 1 + 2 * 3


# --- config file and usage ----------------------------------------------------------

def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("h = 1.0\nk = 1.0\nmethod = exact\n# comment\n")
    out = tmp_path / "qet.json"
    assert run_cli("qet", "--config", str(cfg), "--out", str(out)) == 0
    payload = json.loads(out.read_text())
    assert payload["params"] == {"h": 1.0, "k": 1.0}


def test_cli_flag_overrides_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("h = 1.0\nk = 1.0\nmethod = exact\n")
    out = tmp_path / "qet.json"
    assert run_cli("qet", "--config", str(cfg), "--h", "2.0", "--out", str(out)) == 0
    payload = json.loads(out.read_text())
    assert payload["params"]["h"] == 2.0


def test_missing_required_flag_exits_2(capsys):
    assert run_cli("qet", "--h", "1") == 2
    assert "--k" in capsys.readouterr().err


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli("qet", "--h", "1", "--k", "1", "--bogus")
    assert exc.value.code == 2
    capsys.readouterr()
