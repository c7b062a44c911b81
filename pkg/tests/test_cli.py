import json
import subprocess
import sys

import pytest

from kellerkit import __version__
from kellerkit.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, _ = run(argv, capsys)
    return code, json.loads(out)


def test_check_invertible(capsys):
    code, rep = run_json(["check", "x", "y+x^2"], capsys)
    assert code == 0
    assert rep["verdict"]["status"] == "INVERTIBLE"
    assert rep["inverse"] == {"found": True, "P": "x", "Q": "-x^2 + y"}
    assert rep["presentation"]["g"] == "u^2 - u - v + s"
    assert rep["tool_version"] == __version__
    assert list(rep) == ["tool_version", "command", "input", "keller", "presentation",
                         "normality", "dimension", "cases", "inverse", "complexes", "verdict"]


def test_check_not_keller(capsys):
    code, rep = run_json(["check", "x^2", "y^2"], capsys)
    assert code == 2
    assert rep["verdict"]["status"] == "NOT_KELLER"
    assert rep["presentation"]["s_degree"] == 4
    assert rep["presentation"]["extension_degree"] == 4
    assert rep["normality"]["normal"] is False
    assert rep["normality"]["singular_locus_dimension"] == 1
    assert rep["dimension"]["krull_dimension"] == 2
    assert rep["inverse"] is None


def test_check_identity(capsys):
    code, rep = run_json(["check", "x", "y"], capsys)
    assert code == 0 and rep["inverse"]["P"] == "x" and rep["inverse"]["Q"] == "y"


def test_check_complex_section(capsys):
    _, rep = run_json(["check", "x^2", "y"], capsys)
    kos = rep["complexes"]["koszul_uvs_mod_g"]
    assert kos["is_complex"] is True
    assert kos["ranks"] == [1, 3, 3, 1]


def test_parse_error_exit_1(capsys):
    code, out, err = run(["check", "2x", "y"], capsys)
    assert code == 1 and out == ""
    assert "position 1" in err
    code, _, err = run(["check", "x", "z"], capsys)
    assert code == 1 and "z" in err


def test_usage_error_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "x"])
    assert info.value.code == 1


def test_present(capsys):
    code, rep = run_json(["present", "x^2", "y^2"], capsys)
    assert code == 0
    assert rep["presentation"]["g"] == "s^4 - 2*u*s^2 - 2*v*s^2 + u^2 - 2*u*v + v^2"
    assert rep["presentation"]["primitive"] is True
    _, rep = run_json(["present", "x^2", "y^2", "--lambda", "0"], capsys)
    assert rep["presentation"]["g"] == "s^2 - u"
    assert rep["presentation"]["primitive"] is False
    _, rep = run_json(["present", "x", "y+x^2"], capsys)
    assert rep["presentation"]["s_degree"] == 1


def test_present_find_lambda(capsys):
    _, rep = run_json(["present", "x+y", "(x-y)^2", "--find-lambda"], capsys)
    assert rep["presentation"]["lambda"] == "0"
    assert rep["presentation"]["primitive"] is True
    code, _, _ = run(["present", "x", "y", "--find-lambda", "--lambda", "2"], capsys)
    assert code == 1


def test_normality_dim_invert(capsys):
    _, rep = run_json(["normality", "x^2", "y"], capsys)
    assert rep["normality"]["smooth"] is True and rep["normality"]["normal"] is True
    _, rep = run_json(["dim", "x^2", "y^2"], capsys)
    assert rep["dimension"] == {"krull_dimension": 2, "singular_locus_dimension": 1}
    _, rep = run_json(["invert", "x", "y+x^2"], capsys)
    assert rep["inverse"]["found"] is True
    _, rep = run_json(["invert", "x^2", "y"], capsys)
    assert rep["inverse"]["found"] is False


def test_dependent_map_present_is_error(capsys):
    code, _, err = run(["present", "x+y", "(x+y)^2"], capsys)
    assert code == 1 and "dependent" in err


def test_complex_commands(tmp_path, capsys):
    code, kos = run_json(["complex", "koszul", "u", "v"], capsys)
    assert code == 0
    assert kos["ranks"] == [1, 2, 1]
    assert kos["maps"] == [[["u", "v"]], [["-v"], ["u"]]]
    kfile = tmp_path / "koszul.json"
    kfile.write_text(json.dumps(kos))

    code, red = run_json(["complex", "reduce", str(kfile), "--mod", "s−u−v"], capsys)
    assert code == 0 and red["maps"] == kos["maps"]
    rfile = tmp_path / "reduced.json"
    rfile.write_text(json.dumps(red))
    code, ver = run_json(["complex", "verify", str(rfile)], capsys)
    assert code == 0 and ver["is_complex"] is True

    code, ranks = run_json(["complex", "ranks", str(kfile)], capsys)
    assert ranks == {"ranks": [1, 2, 1], "map_ranks": [1, 1], "generic_defects": [0, 0, 0]}


def test_complex_verify_bad(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["u", "v", "s"], "modulus": None, "ranks": [1, 1, 1],
                               "maps": [[["1"]], [["1"]]]}))
    code, rep = run_json(["complex", "verify", str(bad)], capsys)
    assert code == 4 and rep["is_complex"] is False


def test_complex_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["u", "v", "s"], "ranks": [1, 2],
                               "maps": [[["u", "v ^"]]]}))
    code, out, err = run(["complex", "verify", str(bad)], capsys)
    assert code == 1 and "map d_1, row 0, column 1" in err
    code, _, err = run(["complex", "verify", str(tmp_path / "missing.json")], capsys)
    assert code == 1


def test_corpus(capsys, monkeypatch):
    monkeypatch.setenv("KELLERKIT_THREADS", "1")
    code, rep = run_json(["corpus", "1..4"], capsys)
    assert code == 0
    assert rep["total"] == 4 and rep["invertible"] == 4 and rep["g_linear"] == 4
    assert rep["deviations"] == []
    assert "item" not in rep
    code, rep = run_json(["corpus", "1..1"], capsys)
    assert rep["item"]["verdict"]["status"] == "INVERTIBLE"
    with pytest.raises(SystemExit) as info:
        main(["corpus", "5..2"])
    assert info.value.code == 1


def test_corpus_deviation_exit_5(capsys, monkeypatch):
    from kellerkit import cli
    real = cli._corpus_item

    def broken(args):
        seed, report, checks = real(args)
        return seed, report, dict(checks, g_linear=False)

    monkeypatch.setenv("KELLERKIT_THREADS", "1")
    monkeypatch.setattr(cli, "_corpus_item", broken)
    code, rep = run_json(["corpus", "3"], capsys)
    assert code == 5
    assert rep["deviations"] == [{"seed": 3, "failed": ["g_linear"]}]


def test_bad_thread_cap(capsys, monkeypatch):
    monkeypatch.setenv("KELLERKIT_THREADS", "many")
    code, _, err = run(["corpus", "1..2"], capsys)
    assert code == 1 and "KELLERKIT_THREADS" in err


def test_json_roundtrip_and_pretty(capsys):
    code, out, _ = run(["check", "x^2", "y"], capsys)
    rep = json.loads(out)
    assert json.dumps(rep, separators=(",", ":")) + "\n" == out
    _, pretty, _ = run(["check", "x^2", "y", "--pretty"], capsys)
    assert json.loads(pretty) == rep and "\n  " in pretty


def test_timings_only_on_request(capsys):
    _, rep = run_json(["check", "x", "y+x^2", "--timings"], capsys)
    assert set(rep["timings_ms"]) >= {"verdict"}
    _, rep = run_json(["check", "x", "y+x^2"], capsys)
    assert "timings_ms" not in rep


def test_bundle(tmp_path, capsys):
    path = tmp_path / "bundle.json"
    code, _ = run_json(["check", "x^2", "y^2", "--bundle", str(path)], capsys)
    assert code == 2
    bundle = json.loads(path.read_text())
    assert bundle["lambda"] == "1"
    assert set(bundle["jacobian_ideal_basis"]["generators"]) == {"v*s", "s^2", "u - v"}
    assert bundle["elimination_basis"]["vars"] == ["x", "y", "u", "v", "s"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kellerkit", "check", "x", "y"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"]["status"] == "INVERTIBLE"
