import io
import json
import subprocess
import sys

import pytest

from schottky.algebra.serialize import qseries_from_json
from schottky.cli import run
from schottky.qforms import eisenstein_normalized
from schottky.siegel import FourierExpansion, theta_product
from schottky.universal import UniversalPeriodTable, universal_periods


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def doc(*argv):
    code, text = call(*argv)
    assert code == 0
    d = json.loads(text)
    assert d["schema"] == "1"
    return d


@pytest.fixture
def g1_config(tmp_path):
    p = tmp_path / "g1.json"
    p.write_text(json.dumps({"generators": [{"t_plus": [1, 0], "t_minus": [-1, 0], "s": [0.01, 0.002]}], "N": 3}))
    return str(p)


@pytest.fixture
def g2_config(tmp_path):
    p = tmp_path / "g2.json"
    gens = [{"t_plus": [1, 0], "t_minus": [-1, 0], "s": [0.01, 0]}, {"t_plus": [0, 1], "t_minus": [0, -1], "s": [0.01, 0]}]
    p.write_text(json.dumps({"generators": gens}))
    return str(p)


@pytest.fixture(scope="module")
def theta3_file(tmp_path_factory):
    p = tmp_path_factory.mktemp("forms") / "theta3.json"
    code, _ = call("theta-product", "--g", "3", "--max-trace", "6", "--output", str(p))
    assert code == 0
    return str(p)


def test_tate_series_order_two():
    d = doc("tate-series", "--order", "2")
    assert d["results"]["a4"] == [-5, -45]
    assert d["results"]["a6"] == [-1, -23]
    assert d["inputs"] == {"order": 2}


def test_periods_numeric_rank_one(g1_config):
    d = doc("periods-numeric", "--config", g1_config)
    assert d["results"]["P"] == [[[0.01, 0.002]]]
    assert d["provenance"]["N"] == 3


def test_override_beats_config(g1_config):
    d = doc("periods-numeric", "--config", g1_config, "--N", "5")
    assert d["inputs"]["N"] == 5


def test_numeric_subcommands(g2_config, tmp_path):
    d = doc("differentials-check", "--config", g2_config)
    assert d["results"]["max_error"] < 1e-6
    d = doc("convergence-cert", "--config", g2_config)
    assert d["results"]["certified"] and len(d["results"]["pairs"]) == 12
    out = tmp_path / "limit.csv"
    d = doc("limit-set", "--config", g2_config, "--depth", "2", "--format", "csv", "--csv-output", str(out))
    assert len(out.read_text().splitlines()) == d["results"]["count"]


def test_schottky_check_theta3(theta3_file):
    d = doc("schottky-check", "--form", theta3_file, "--hyperelliptic", "--degree", "1", "--points", "3")
    assert d["results"]["verdict"] == "zero at all points"
    assert len(d["results"]["evaluations"]) == 3


def test_schottky_check_generic_points_nonzero(theta3_file):
    d = doc("schottky-check", "--form", theta3_file, "--degree", "6", "--points", "2")
    assert d["results"]["verdict"] == "nonzero"


def test_schottky_check_with_table(tmp_path):
    F = FourierExpansion.constant(2, 3, max_trace=1)
    fp = tmp_path / "f.json"
    fp.write_text(json.dumps(F.to_json()))
    tp = tmp_path / "t.json"
    code, _ = call("periods-universal", "--g", "2", "--D", "1", "--mode", "evaluated", "--point", "1,2,-1,-2", "--output", str(tp))
    assert code == 0
    d = doc("schottky-check", "--form", str(fp), "--table", str(tp), "--degree", "1")
    assert d["results"]["verdict"] == "nonzero"


def test_lowest_term(theta3_file):
    d = doc("lowest-term", "--form", theta3_file, "--mode", "evaluated", "--hyperelliptic", "--points", "2")
    assert d["results"]["all_zero"]


def test_qseries_commands_round_trip():
    d = doc("eisenstein", "--k", "2", "--order", "4")
    assert qseries_from_json(d["results"]) == eisenstein_normalized(2, 4)
    d = doc("j-invariant", "--order", "1")
    j = qseries_from_json(d["results"]["j_times_1728"])
    assert [j[n] for n in (-1, 0, 1)] == [1, 744, 196884]


def test_check_commands():
    d = doc("tate-verify", "--order", "3", "--discriminant-order", "20")
    assert all(c["pass"] for c in d["results"]["checks"])
    d = doc("identities", "--n-max", "50", "--prime-bound", "100")
    assert {c["name"] for c in d["results"]["checks"]} >= {"sigma7", "four_squares", "serre_trichotomy"}
    assert all(c["pass"] for c in d["results"]["checks"])


def test_siegel_commands(theta3_file):
    with open(theta3_file) as fh:
        emitted = json.load(fh)
    assert FourierExpansion.from_json(emitted["results"]["expansion"]) == theta_product(3, 6)
    d = doc("lattice-theta", "--lattice", "L8", "--max-trace", "2")
    F = FourierExpansion.from_json(d["results"]["expansion"])
    assert sorted(int(a) for a in F.terms.values()) == [1, 240, 2160]
    d = doc("schottky-J", "--max-trace", "1")
    assert d["results"]["nonzero_terms"] == 0
    d = doc("boundary-restrict", "--form", theta3_file)
    assert d["results"]["expansion"]["g"] == 2
    d = doc("theta-product", "--g", "2", "--max-trace", "1")
    assert "fractional_expansion" in d["results"]


def test_table_round_trip():
    d = doc("periods-universal", "--g", "2", "--D", "1")
    T = UniversalPeriodTable.from_json(d["results"]["table"])
    ref = universal_periods(2, 1)
    assert all(T[k] == ref[k] for k in ref.entries)
    d = doc("periods-hyperelliptic", "--g", "2", "--D", "2", "--mode", "evaluated", "--x", "3,-7/2")
    assert d["results"]["symmetric"]


def test_determinism(theta3_file):
    a = call("schottky-check", "--form", theta3_file, "--hyperelliptic", "--degree", "6", "--points", "2")
    b = call("schottky-check", "--form", theta3_file, "--hyperelliptic", "--degree", "6", "--points", "2")
    assert a == b


def test_exit_codes(tmp_path):
    assert call("no-such-command")[0] == 2
    assert call("tate-series", "--order", "x")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("periods-numeric", "--config", str(bad))[0] == 2
    nonfinite = tmp_path / "nf.json"
    nonfinite.write_text(json.dumps({"generators": [{"t_plus": [1e999, 0], "t_minus": [-1, 0], "s": [0.1, 0]}]}))
    assert call("periods-numeric", "--config", str(nonfinite))[0] == 2
    expanding = tmp_path / "exp.json"
    expanding.write_text(json.dumps({"generators": [{"t_plus": [1, 0], "t_minus": [-1, 0], "s": [2, 0]}]}))
    assert call("periods-numeric", "--config", str(expanding))[0] == 3
    assert call("periods-hyperelliptic", "--g", "2", "--mode", "evaluated", "--x", "3,-3")[0] == 3
    assert call("schottky-J", "--max-trace", "3")[0] == 4


def test_error_document_is_structured(capsys):
    code = run(["schottky-J", "--max-trace", "3"])
    assert code == 4
    d = json.loads(capsys.readouterr().err)
    assert d["error"]["kind"] == "resource" and d["error"]["exit_status"] == 4


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "schottky.cli", "tate-series", "--order", "1"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout)["results"]["a4"] == [-5]
