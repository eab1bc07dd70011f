import io
import json
import subprocess
import sys

import pytest

from puiseux_kit.cli import run


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def specs(tmp_path):
    paths = {}
    for name, obj in {
        "fg23": {"type": "finitely_generated", "generators": ["2", "3"]},
        "pr": {"type": "prime_reciprocal"},
        "it": {"type": "irrational_threshold", "alpha": {"a": "1", "b": "1", "c": 2}},
        "p39": {"type": "lattice_union", "alphas": {"kind": "prop39", "seed": [0, 1, 2, 7, 74]},
                "bs": {"kind": "pow2"}},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
    return paths


def test_lengths_example(specs):
    code, out, _ = call(["lengths", "--spec", specs["fg23"], "--x", "6"])
    assert code == 0 and json.loads(out) == {"lengths": [2, 3], "exact": True}


def test_verify_paper_example():
    code, out, _ = call(["verify-paper", "--family", "ex44", "--alpha", "1+1*sqrt(2)", "--n", "5"])
    res = json.loads(out)
    assert code == 0 and res[0]["verdict"] == "Pass" and res[0]["params"]["rho_n"] == 17


def test_classify_example(specs):
    code, out, _ = call(["classify", "--spec", specs["pr"]])
    assert code == 0 and json.loads(out)["bf"] == "No"


def test_input_errors(specs, tmp_path):
    code, _, err = call(["lengths", "--spec", specs["fg23"], "--x", "1"])
    assert code == 1 and json.loads(err)["member"] is False
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "finitely_generated",\n"generators": [}')
    code, _, err = call(["member", "--spec", str(bad), "--x", "1"])
    assert code == 1 and "line 2" in json.loads(err)["field"]
    code, _, err = call(["member", "--spec", specs["fg23"], "--x", "1", "--denom-cap", "0"])
    assert code == 1
    code, _, _ = call(["member", "--spec", specs["fg23"]])
    assert code == 1


def test_truncated_exit_code(specs):
    code, out, _ = call(["factorize", "--spec", specs["it"], "--x", "10", "--denom-cap", "4",
                         "--node-cap", "2000"])
    res = json.loads(out)
    assert code == 2 and res["exact"] is False and "budget" in res
    code, out, _ = call(["union-k", "--spec", specs["p39"], "--k", "2", "--value-cap", "8",
                         "--denom-cap", "8"])
    assert code == 2 and json.loads(out)["exact"] is False


def test_fail_exit_code():
    code, out, _ = call(["verify-paper", "--family", "thm312", "--n", "1"])
    assert code == 3 and any(r["verdict"] == "Fail" for r in json.loads(out))


ALL = [
    ["member", "--x", "5"], ["divides", "--x", "2", "--y", "5"], ["atoms", "--bound", "10"],
    ["factorize", "--x", "12"], ["lengths", "--x", "12"], ["delta", "--bound", "30"],
    ["elasticity"], ["rho-k", "--k", "3"], ["lambda-k", "--k", "3"], ["union-k", "--k", "3"],
    ["catenary", "--x", "12"], ["omega", "--u", "3"], ["tau", "--u", "3"], ["tame", "--u", "3"],
    ["big-m", "--u", "3"], ["lambda-inv"], ["closure"], ["conductor"], ["classify"],
]


@pytest.mark.parametrize("argv", ALL, ids=[a[0] for a in ALL])
def test_every_subcommand_round_trips_and_is_deterministic(specs, argv):
    full = [argv[0], "--spec", specs["fg23"]] + argv[1:]
    c1, o1, _ = call(full)
    c2, o2, _ = call(full)
    assert c1 == 0 and o1 == o2
    assert json.loads(o1) is not None
    c3, o3, _ = call(full + ["--format", "tsv"])
    assert c3 == 0 and "\t" in o3


def test_module_entry_point(specs):
    p = subprocess.run([sys.executable, "-m", "puiseux_kit", "member", "--spec", specs["fg23"],
                        "--x", "1"], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["member"] is False
