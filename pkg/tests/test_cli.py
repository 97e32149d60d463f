import json
import subprocess
import sys

from torimod.arith.qseries import QSeries, Verdict
from torimod.cli import main
from torimod.generators import GeneratorPoly, clear_memory_cache, s_series

P1_DEG = '{"l": 5, "values": [1, 1]}'


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_form_both_pipelines(capsys):
    code, out, _ = run(capsys, "form", "--fan", "p1", "--deg", P1_DEG, "--prec", "12", "--pipeline", "both")
    assert code == 0
    data = json.loads(out)
    series = QSeries.from_json(data["series"])
    assert series.compare(s_series(1, 5, 1, 12) * -2) is Verdict.EQUAL
    assert GeneratorPoly.from_json(data["generators"]) == GeneratorPoly.s(1, 5) * -2


def test_form_certify_and_express(capsys):
    code, out, _ = run(capsys, "form", "--fan", "p2", "--deg", '{"l": 5, "values": [1, 2, 4]}', "--prec", "8",
                       "--certify", "--express")
    data = json.loads(out)
    assert code == 0 and data["certificate_valid"] is True
    poly = GeneratorPoly.from_json(data["generators"])
    assert poly.to_series(8).compare(QSeries.from_json(data["series"])) is Verdict.EQUAL


def test_gen_output(capsys):
    code, out, _ = run(capsys, "gen", "--a", "1", "--l", "5", "--k", "1", "--prec", "3")
    data = json.loads(out)
    z = QSeries.from_json(data["series"])
    assert code == 0 and data["symbol"] == "s_{1/5}^(1)"
    assert z.compare(s_series(1, 5, 1, 3)) is Verdict.EQUAL


def test_pretty_output(capsys):
    code, out, _ = run(capsys, "gen", "--type", "r", "--l", "1", "--k", "4", "--prec", "2", "--pretty")
    assert code == 0
    # B_4/4 = -1/120, then -2 sigma_3(n)
    assert "series: −1/120 − 2·q − 18·q² + O(q³)" in out


def test_exit_codes(capsys):
    assert run(capsys, "gen", "--a", "5", "--l", "5", "--k", "1", "--prec", "3")[0] == 1          # BadResidue
    code, _, err = run(capsys, "form", "--fan", "p1", "--deg", '{"l": 5, "values": [5, 1]}', "--prec", "3")
    assert code == 1 and "InvalidDegree" in err
    assert run(capsys, "form", "--fan", "p1", "--prec", "3")[0] == 2                   # missing --deg
    assert run(capsys, "form", "--fan", "no-such-fan", "--deg", P1_DEG, "--prec", "3")[0] == 2
    assert run(capsys, "gen", "--a", "1", "--l", "5", "--k", "1", "--prec", "x")[0] == 2
    assert run(capsys, "verify", "--suite", "nonsense")[0] == 2


def test_hecke_and_fricke_commands(capsys):
    code, out, _ = run(capsys, "hecke", "--fan", "p1", "--deg", '{"l": 7, "values": [2, 2]}', "--p", "3",
                       "--prec", "10", "--sublattice", "--express")
    data = json.loads(out)
    assert code == 0 and data["operator"] == "T_p" and data["sublattice_side_equal"] is True
    code, out, _ = run(capsys, "fricke", "--a", "2", "--l", "7", "--prec", "10")
    assert code == 0 and json.loads(out)["matches_direct_expansion"] is True
    code, out, _ = run(capsys, "lift", "--a", "1", "--l", "5", "--k", "1", "--p", "2", "--prec", "10")
    assert code == 0 and json.loads(out)["level"] == 10


def test_fan_info(capsys):
    code, out, _ = run(capsys, "fan-info", "--fan", "p2")
    data = json.loads(out)
    assert code == 0 and data["smooth"] and data["cones_by_dim"] == {"0": 1, "1": 3, "2": 3}


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "weight1-eigen")
    assert code == 0 and "PASS" in out and "1/1 suites passed" in out


def test_cache_dir_is_transparent(capsys, tmp_path):
    argv = ["gen", "--a", "3", "--l", "7", "--k", "2", "--prec", "30"]
    clear_memory_cache()
    plain = run(capsys, *argv)[1]
    clear_memory_cache()
    cold = run(capsys, *argv, "--cache-dir", str(tmp_path))[1]
    clear_memory_cache()
    warm = run(capsys, *argv, "--cache-dir", str(tmp_path))[1]
    assert plain == cold == warm
    assert any(tmp_path.iterdir())


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torimod", "gen", "--a", "1", "--l", "5", "--k", "1", "--prec", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["symbol"] == "s_{1/5}^(1)"


def test_gen_reduce(capsys):
    code, out, _ = run(capsys, "gen", "--a", "1", "--l", "5", "--k", "2", "--prec", "10", "--reduce")
    data = json.loads(out)
    poly = GeneratorPoly.from_json(data["reduction"])
    assert code == 0 and poly.weight == 2
    assert poly.to_series(10).compare(s_series(1, 5, 2, 10)) is Verdict.EQUAL
