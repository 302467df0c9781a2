import json

import pytest

from chamber_forge import io as cfio
from chamber_forge.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from chamber_forge.dvr import pullback, vertical_fan
from chamber_forge.polyhedral import Fan, MatrixGroup
from chamber_forge.rootdata import preset, weyl_group

import corpus


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(cfio.dumps(doc), encoding="utf-8")
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def p1_path(tmp_path):
    return write(tmp_path, "p1.json", cfio.fan_to_document(corpus.p1()))


def test_fan_check_p1(capsys, p1_path):
    code, rep = run(capsys, ["fan", "check", p1_path, "--complete", "--smooth", "--projective"])
    assert code == EXIT_OK
    assert rep["verdicts"] == {"valid": True, "complete": True, "smooth": True, "projective": True}
    assert rep["schema_version"] == "1" and rep["command"] == "fan check"
    assert "timing" not in rep


def test_fan_check_sc_chamber_not_smooth(capsys, tmp_path):
    path = write(tmp_path, "c.json", cfio.fan_to_document(corpus.named_fans()["chamber_sc_A2"]))
    code, rep = run(capsys, ["fan", "check", path, "--smooth"])
    assert code == EXIT_FAIL and rep["witnesses"]["smooth"]["index"] == 3


def test_fan_check_non_projective(capsys, tmp_path):
    path = write(tmp_path, "np.json", cfio.fan_to_document(corpus.non_projective_fan()))
    code, rep = run(capsys, ["fan", "check", path, "--projective", "--complete"])
    assert code == EXIT_FAIL
    assert rep["verdicts"]["complete"] and not rep["verdicts"]["projective"]
    assert "farkas" in rep["witnesses"]["projective"]


def test_fan_check_stable(capsys, tmp_path):
    g = weyl_group(preset("A2"))
    fan = write(tmp_path, "a2.json", cfio.fan_to_document(corpus.weyl("A2")))
    grp = write(tmp_path, "w.json", cfio.group_to_document(g))
    assert main(["fan", "check", fan, "--stable", grp]) == EXIT_OK
    quad = write(tmp_path, "q.json", cfio.fan_to_document(corpus.named_fans()["quadrant"]))
    assert main(["fan", "check", quad, "--stable", grp]) == EXIT_FAIL
    capsys.readouterr()


@pytest.mark.parametrize("text", ["{", "[]", '{"schema_version": "1"}'])
def test_malformed_input(tmp_path, capsys, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    assert main(["fan", "check", str(p), "--smooth"]) == EXIT_USAGE
    assert main(["fan", "check", str(tmp_path / "missing.json")]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_rank_guard(tmp_path, capsys):
    f = Fan.from_cones(5, [[tuple(int(i == j) for j in range(5)) for i in range(5)]])
    assert main(["fan", "check", write(tmp_path, "r5.json", cfio.fan_to_document(f))]) == EXIT_USAGE


def test_fan_saturate(tmp_path, capsys):
    quad = write(tmp_path, "q.json", cfio.fan_to_document(corpus.named_fans()["quadrant"]))
    grp = write(tmp_path, "w.json", cfio.group_to_document(weyl_group(preset("B2"))))
    out = tmp_path / "sat.json"
    code, rep = run(capsys, ["fan", "saturate", quad, "--group", grp, "-o", str(out)])
    assert code == EXIT_OK and rep["verdicts"]["stable"]
    sat = cfio.fan_from_document(json.loads(out.read_text()))
    assert sat == corpus.weyl("B2")


def test_refine_presets(capsys):
    code, rep = run(capsys, ["refine", "--preset", "A2", "--form", "sc"])
    assert code == EXIT_OK and all(rep["verdicts"].values())
    code, rep = run(capsys, ["refine", "--preset", "A1"])
    assert code == EXIT_OK
    assert cfio.fan_from_document(rep["fan"]) == Fan.from_cones(1, [[(1,)]])


def test_refine_budget_zero(tmp_path, capsys):
    path = write(tmp_path, "c.json", cfio.fan_to_document(corpus.named_fans()["chamber_sc_A2"]))
    code, rep = run(capsys, ["refine", "--fan", path, "--budget", "0"])
    assert code == EXIT_FAIL and rep["verdicts"] == {"smooth": False}
    code, rep = run(capsys, ["refine", "--fan", path])
    assert code == EXIT_OK and rep["verdicts"]["smooth"]


def test_refine_unknown_preset_and_missing_input(capsys):
    assert main(["refine", "--preset", "E8"]) == EXIT_USAGE
    assert main(["refine"]) == EXIT_USAGE


def test_rootdatum(capsys):
    code, rep = run(capsys, ["rootdatum", "weylfan", "--preset", "G2"])
    assert code == EXIT_OK and rep["witnesses"]["maximal_cones"] == 12
    code, rep = run(capsys, ["rootdatum", "weylfan", "--cartan", "2 -1; -1 2", "--form", "sc"])
    assert rep["witnesses"]["chamber_index"] == 3
    code, rep = run(capsys, ["rootdatum", "strata", "--preset", "A3"])
    assert code == EXIT_OK and rep["witnesses"]["count"] == 8
    assert main(["rootdatum", "strata", "--preset", "A2", "--form", "sc"]) == EXIT_USAGE
    assert main(["rootdatum", "weylfan", "--cartan", "2 x; 1 2"]) == EXIT_USAGE


def test_monoid_examples(capsys, tmp_path):
    code, rep = run(capsys, ["monoid", "[2,3]", "--saturate"])
    assert code == EXIT_OK and rep["verdicts"]["saturated"] is False
    assert rep["witnesses"]["added"] == [[1]]
    code, rep = run(capsys, ["monoid", "[[0,1],[2,1]]", "--saturate"])
    assert rep["witnesses"]["added"] == [[1, 1]]
    code, rep = run(capsys, ["monoid", "[1]", "--saturate"])
    assert rep["verdicts"]["saturated"] is True
    p = tmp_path / "g.json"
    p.write_text("[[0,1],[2,1]]")
    code, rep = run(capsys, ["monoid", str(p), "--hilbert"])
    assert code == EXIT_OK and sorted(rep["witnesses"]["hilbert_basis"]) == [[0, 1], [1, 1], [2, 1]]
    code, rep = run(capsys, ["monoid", "[[1],[-1]]", "--hilbert"])
    assert code == EXIT_FAIL and rep["verdicts"] == {"pointed": False}
    code, rep = run(capsys, ["monoid", "[2,3]", "--fiber-checks"])
    assert code == EXIT_OK
    assert main(["monoid", "[[1], [1, 2]]", "--saturate"]) == EXIT_USAGE
    assert main(["monoid", "nonsense", "--saturate"]) == EXIT_USAGE


def test_dvr_analyze(capsys, tmp_path):
    path = write(tmp_path, "v.json", cfio.dvr_fan_to_document(vertical_fan(2)))
    code, rep = run(capsys, ["dvr", "analyze", path])
    assert code == EXIT_OK and rep["witnesses"]["special_fiber"]["count"] == 1
    path = write(tmp_path, "pb.json", cfio.dvr_fan_to_document(pullback(corpus.p1())))
    code, rep = run(capsys, ["dvr", "analyze", path])
    assert rep["verdicts"]["constant_family"] is True


def test_counterexample(capsys):
    code, rep = run(capsys, ["counterexample", "--ray-bound", "1"])
    assert code == EXIT_OK and rep["witnesses"]["candidates"] == 131
    assert rep["witnesses"]["orbit_table"][100] == [100, [100, 1]]
    assert main(["counterexample", "--matrix", "1 0 0 1"]) == EXIT_USAGE
    assert main(["counterexample", "--matrix", "1 1 0"]) == EXIT_USAGE
    assert main(["counterexample", "--ray-bound", "0"]) == EXIT_USAGE


def test_cox(capsys, tmp_path, p1_path):
    code, rep = run(capsys, ["cox", p1_path])
    assert code == EXIT_OK and rep["verdicts"]["semistable_equals_nondegenerate"]
    path = write(tmp_path, "pp.json", cfio.fan_to_document(corpus.p1xp1()))
    code, rep = run(capsys, ["cox", path])
    assert code == EXIT_OK and rep["witnesses"]["rho"] == [0, 0, 1, 1]
    code, rep = run(capsys, ["cox", write(tmp_path, "p2.json", cfio.fan_to_document(corpus.p2())),
                             "--box", "0"])
    assert code == EXIT_FAIL and rep["witnesses"]["box"] == 0


def test_cox_size_guard(capsys, tmp_path):
    # thirteen rays: the complete fan on the 3-box directions in the plane
    rays = [(1, 0), (3, 1), (2, 1), (3, 2), (1, 1), (1, 2), (0, 1), (-1, 1), (-1, 0),
            (-1, -1), (0, -1), (1, -1), (2, -1)]
    cones = [[rays[i], rays[(i + 1) % len(rays)]] for i in range(len(rays))]
    path = write(tmp_path, "big.json", cfio.fan_to_document(Fan.from_cones(2, cones)))
    assert main(["cox", path]) == EXIT_USAGE
    assert "guard" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main([]) == EXIT_USAGE
    assert main(["fan"]) == EXIT_USAGE
    assert main(["monoid", "[1]"]) == EXIT_USAGE
    assert main(["--version"]) == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["counterexample", "--ray-bound", "1"],
    ["rootdatum", "weylfan", "--preset", "B2"],
    ["refine", "--preset", "G2"],
    ["monoid", "[[0,1],[2,1]]", "--saturate"],
])
def test_reports_byte_identical(capsys, argv):
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_timing_is_opt_in(capsys):
    code, rep = run(capsys, ["rootdatum", "weylfan", "--preset", "A1", "--timing"])
    assert rep["timing"]["seconds"] >= 0
