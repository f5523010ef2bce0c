import io
import json
from pathlib import Path

import pytest

from toricorb.cli import main, run

DATA = Path(__file__).resolve().parent.parent / "data"


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, out = call(*argv, "--json")
    return code, json.loads(out)


def test_r_vector_text():
    assert call("r-vector", DATA / "cube.json") == (0, "(8, 3)\n")
    assert call("r-vector", DATA / "prism.json") == (0, "(6, 2)\n")


def test_r_vector_cap_is_inconclusive():
    code, js = call_json("r-vector", DATA / "cube.json", "--max-vertices", "4")
    assert code == 0
    assert js["result"]["status"] == "inconclusive"


def test_validate():
    code, js = call_json("validate", DATA / "prism_pair.json")
    assert code == 0 and js["result"]["ok"] and js["schema_version"] == "1.0"
    code, out = call("validate", '{"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[1,2],[1,3],[2,3]]}')
    assert code == 0 and "complete" in out


def test_validate_bad_pair_exit_3():
    bad = json.dumps({"polytope": {"dim": 2, "facets": 3, "vertices": [[1, 2], [1, 3], [2, 3]]},
                      "lambda": [[1, 0], [2, 0], [0, 1]]})
    code, js = call_json("validate", bad)
    assert code == 3
    assert not js["result"]["ok"]


def test_input_errors_exit_2(tmp_path):
    code, out = call("validate", "{not json")
    assert code == 2 and "line 1" in out
    code, _ = call("validate", tmp_path / "missing.json")
    assert code == 2
    code, _ = call("validate", '{"dim": 2}')
    assert code == 2


def test_local_groups_face():
    code, js = call_json("local-groups", DATA / "prism_pair.json", "--face", "5")
    assert code == 0
    orders = [v["order"] for v in js["result"]["vertices"]]
    assert orders == [1, 1, 1, 3, 3, 3]
    face = js["result"]["faces"][0]
    assert face["group"] == []
    assert [v["order"] for v in face["vertex_groups"]] == [3, 3, 3]


def test_evenness():
    code, js = call_json("evenness", DATA / "prism_pair.json", "--oracle")
    assert code == 0 and js["result"]["verdict"] == "violated"
    code, js = call_json("evenness", DATA / "cp4_11222_pair.json")
    assert js["result"]["verdict"] == "satisfied" and js["result"]["r_vector"] == [5, 4, 3]


def test_integrality():
    code, js = call_json("integrality", DATA / "cp2_235.json")
    rows = {tuple(r["cone"]): r["row"] for r in js["result"]["integrality_matrix"]}
    assert rows == {(2, 3): [0, 2, 2], (1, 3): [3, 0, 3], (1, 2): [5, 5, 0]}


def test_cohomology():
    code, js = call_json("cohomology", DATA / "cp2_235.json")
    assert code == 0
    res = js["result"]
    assert [m["rank"] for m in res["modules"]] == [1, 1, 1]
    assert "w1^2 - 30*w2" in res["relations"]
    assert res["flag"] == "unconditional"
    code, js = call_json("cohomology", DATA / "cp2_235.json", "--max-degree", "1")
    assert len(js["result"]["modules"]) == 2


def test_tower_and_hirzebruch():
    code, js = call_json("tower", DATA / "tower_packed.json")
    assert js["result"]["matrix"]["raw"] == [[3, -2, 0, 0], [0, 0, 2, -1]]
    assert js["result"]["fibration"][0]["ell"] == 6
    code, js = call_json("hirzebruch", "--alpha", "3", "--beta", "2")
    assert code == 0 and js["result"]["ranks"] == [1, 2, 1]
    assert "y^2 - 6*z" in js["result"]["xyz_generators"]["relations"]
    code, js = call_json("hirzebruch", DATA / "hirzebruch.json")
    assert js["result"]["fibration"]["genuine"]
    code, _ = call("hirzebruch")
    assert code == 2
    code, _ = call("hirzebruch", "--alpha", "2", "--beta", "4")
    assert code == 3


def test_retract_lists_sequences():
    code, js = call_json("retract", DATA / "prism.json", "--limit", "3")
    assert len(js["result"]["retractions"]) == 3
    assert js["result"]["dimension_profile"] == [3, 2, 2, 1, 1, 0]


def test_deterministic_output():
    a = call("cohomology", DATA / "cp3_3126.json", "--json")
    b = call("cohomology", DATA / "cp3_3126.json", "--json")
    assert a == b


def test_main_returns_code(capsys):
    assert main(["r-vector", str(DATA / "prism.json")]) == 0
    assert capsys.readouterr().out.strip() == "(6, 2)"


def test_every_data_file_validates():
    for path in sorted(DATA.glob("*.json")):
        if path.stem in {"tower_packed", "cp4_11222", "hirzebruch"}:
            continue
        assert call("validate", path)[0] == 0, path.name


@pytest.mark.parametrize("cmd", ["validate", "local-groups", "retract", "r-vector", "evenness",
                                 "integrality", "cohomology", "tower", "hirzebruch"])
def test_help(cmd, capsys):
    with pytest.raises(SystemExit) as exc:
        run([cmd, "--help"])
    assert exc.value.code == 0
