"""
命令行测试：退出码约定与 JSON 输出
"""

import io
import json

import pytest

from graph import complete_graph, format_edge_list, path_graph
from main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from numeric import random_framework


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    document = json.loads(text)
    assert document["format"] == 1
    return code, document


def test_rigid():
    code, text = run("rigid", "K5-e")
    assert code == EXIT_OK
    assert text.startswith("✅")

    code, document = run_json("rigid", "K5-e", "--numeric")
    assert code == EXIT_OK
    assert document["verdict"]["answer"] is True
    assert document["numeric"] is True
    assert document["verdict"]["theorem"] == "1.1"


def test_rigid_edge_list_file(tmp_path):
    path = tmp_path / "path.txt"
    path.write_text(format_edge_list(path_graph(4)), encoding="utf-8")
    code, text = run("rigid", str(path))
    assert code == EXIT_FAIL
    assert text.startswith("❌")


def test_global():
    code, document = run_json("global", "H1", "--stress")
    assert code == EXIT_OK
    assert document["verdict"]["answer"] is True
    assert document["verdict"]["theorem"] == "1.2"
    assert document["stress_certificate"]["theorem"] == "8.2"
    assert document["stress_certificate"]["answer"] is True


def test_circuit():
    assert run("circuit", "H2")[0] == EXIT_OK
    code, document = run_json("circuit", "K4")
    assert code == EXIT_FAIL
    assert document["reason"]


def test_construct_then_reduce(tmp_path):
    code, document = run_json("construct", "--n", "7", "--seed", "2")
    assert code == EXIT_OK
    assert document["graph"]["n"] == 7

    path = tmp_path / "circuit.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    code, reduced = run_json("reduce", str(path))
    assert code == EXIT_OK
    assert reduced["trace"]["base"] in ("K5-e", "H1")
    assert reduced["graph"] == document["graph"]


def test_reduce():
    code, document = run_json("reduce", "H2")
    assert code == EXIT_OK
    assert document["trace"]["base"] == "H1"
    assert len(document["trace"]["steps"]) == 1

    code, document = run_json("reduce", "K4")
    assert code == EXIT_FAIL
    assert document["error"] == "not-a-circuit"


def test_construct_too_small():
    assert run("construct", "--n", "4")[0] == EXIT_USAGE


def test_vfree():
    assert run("vfree", "K5-e", "--vertex", "0", "--numeric")[0] == EXIT_OK
    assert run("vfree", "K5-e", "--vertex", "9")[0] == EXIT_USAGE


def test_vr():
    assert run("vr", "K4")[0] == EXIT_OK
    assert run("vr", "K4", "--property", "minimal")[0] == EXIT_FAIL
    code, document = run_json("vr", "K4")
    assert document["verdicts"]["globally_rigid"]["answer"] is True


def test_stress_appendix_framework():
    code, document = run_json("stress", "H1")
    assert code == EXIT_OK
    assert document["rigidity_rank"] == 16
    assert document["stress_rank"] == 12
    assert document["max_rank"] is True


@pytest.mark.parametrize("name, ranks", [("K5-e", (13, 9)), ("H2", (19, 15))])
def test_stress_ranks(name, ranks):
    code, document = run_json("stress", name)
    assert code == EXIT_OK
    assert (document["rigidity_rank"], document["stress_rank"]) == ranks


def test_stress_off_cylinder_point(tmp_path):
    data = random_framework(complete_graph(3), 0, bits=12).to_dict()
    data["points"][0]["x"] = "2"
    path = tmp_path / "off.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert run("stress", str(path))[0] == EXIT_USAGE


def test_stress_requires_one_dimensional_cokernel(tmp_path):
    path = tmp_path / "k5.json"
    framework = random_framework(complete_graph(5), 0, bits=12)
    path.write_text(json.dumps(framework.to_dict()), encoding="utf-8")

    code, document = run_json("stress", str(path))
    assert code == EXIT_FAIL
    assert document["cokernel_dimension"] == 2

    code, document = run_json("stress", str(path), "--any")
    assert code == EXIT_OK
    assert len(document["stress"]["omega"]) == 10


def test_stress_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"graph": ', encoding="utf-8")
    assert run("stress", str(path))[0] == EXIT_USAGE


def test_verify_appendix():
    code, text = run("verify-appendix")
    assert code == EXIT_OK
    assert "3/3" in text
    assert run("verify-appendix", "--scalar", "f64")[0] == EXIT_OK

    code, document = run_json("verify-appendix", "--corrupt")
    assert code == EXIT_FAIL
    assert all("residual" in case["checks"] and not case["checks"]["residual"] for case in document["cases"])


def test_cross_validate_is_reproducible(tmp_path):
    csv_file = tmp_path / "agreement.csv"
    first = run("cross-validate", "--count", "4", "--n-max", "5", "--seed", "7", "--json", "--csv", str(csv_file))
    second = run("cross-validate", "--count", "4", "--n-max", "5", "--seed", "7", "--json")
    assert first == second
    assert first[0] == EXIT_OK
    assert json.loads(first[1])["count"] == 4
    assert csv_file.exists()


def test_cross_validate_empty_corpus():
    code, document = run_json("cross-validate", "--count", "0")
    assert code == EXIT_OK
    assert document["summary"] == {}


def test_input_errors():
    assert run("rigid", "no-such-file.json")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


def test_global_ear_decomposition():
    code, document = run_json("global", "K5-e", "--ears")
    assert code == EXIT_OK
    assert len(document["ears"]) == 1
    assert run("global", "K5-e", "--ears", "--cap", "5")[0] == EXIT_USAGE
