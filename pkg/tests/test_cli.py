import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pl4torsion import cli
from pl4torsion.complex import random_frames
from pl4torsion.errors import ParseError
from pl4torsion.fileformat import dumps, parse
from pl4torsion.fuzz import fuzz
from pl4torsion.torsion import evaluate
from pl4torsion.triangulation import canonical_s4, move_1_5, move_5_1

TAU_S4 = 2**25 / 9


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_example(tmp_path, name):
    p = tmp_path / f"{name}.txt"
    p.write_text(cli.example_file(name))
    return str(p)


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing", None)
    return doc


@pytest.mark.parametrize("name, nv, ns", [("s4-canonical", 5, 2), ("s4-boundary-5simplex", 6, 6)])
def test_example_round_trip(capsys, name, nv, ns):
    code, text, _ = run(capsys, "example", name)
    assert code == 0
    doc = parse(text)
    assert len(doc.triangulation.vertices) == nv
    assert len(doc.triangulation.simplices) == ns
    stripped = "".join(ln + "\n" for ln in text.splitlines() if not ln.startswith("#"))
    assert dumps(doc.triangulation, doc.realization) == stripped


def test_example_unknown(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["example", "torus"])
    assert err.value.code == cli.EXIT_USAGE


def test_invariant_json(capsys, tmp_path):
    path = write_example(tmp_path, "s4-canonical")
    code, out, _ = run(capsys, "invariant", path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["invariant"] == pytest.approx(1.0, rel=1e-9)
    assert doc["abs_tau"] == pytest.approx(TAU_S4, rel=1e-9)
    assert doc["counts"]["vertices"] == 5
    assert [m["exponent"] for m in doc["torsion"]["minors"]] == [-1, 1, -1, 1, -1, 1]
    assert "seconds" in doc["timing"]


def test_report_deterministic(capsys, tmp_path):
    path = write_example(tmp_path, "s4-boundary-5simplex")
    _, a, _ = run(capsys, "invariant", path, "--json")
    _, b, _ = run(capsys, "invariant", path, "--json")
    assert strip_timing(json.loads(a)) == strip_timing(json.loads(b))
    # re-ingesting the emitted file gives the same report
    doc = parse(open(path).read())
    again = tmp_path / "again.txt"
    again.write_text(dumps(doc.triangulation, doc.realization))
    _, c, _ = run(capsys, "invariant", str(again), "--json")
    assert strip_timing(json.loads(c)) == strip_timing(json.loads(a))


def test_invariant_seed_changes_partition_not_tau(capsys, tmp_path):
    path = write_example(tmp_path, "s4-boundary-5simplex")
    _, a, _ = run(capsys, "invariant", path, "--json")
    _, b, _ = run(capsys, "invariant", path, "--json", "--seed", "3")
    assert json.loads(b)["abs_tau"] == pytest.approx(json.loads(a)["abs_tau"], rel=1e-8)


def test_check_report(capsys, tmp_path):
    path = write_example(tmp_path, "s4-canonical")
    code, out, _ = run(capsys, "check", path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["validation"]["valid"]
    assert max(doc["composition_norms"]) < 1e-10
    assert doc["alternating_dimension_sum"] == 0
    assert doc["acyclicity"]["ranks"] == [10, 10, 0, 10, 20, 10]


def single_simplex_text():
    t, r = canonical_s4()
    lines = dumps(t, r).splitlines()
    return "\n".join(lines[:-1]) + "\n"


def test_check_single_simplex(capsys, tmp_path):
    p = tmp_path / "one.txt"
    p.write_text(single_simplex_text())
    code, out, _ = run(capsys, "check", str(p))
    assert code == 0
    assert "not closed" in out


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("pl4-triangulation 1\nvertex A 0 0\n")
    assert run(capsys, "invariant", str(bad))[0] == cli.EXIT_PARSE
    assert run(capsys, "invariant", str(tmp_path / "missing.txt"))[0] == cli.EXIT_PARSE
    one = tmp_path / "one.txt"
    one.write_text(single_simplex_text())
    assert run(capsys, "invariant", str(one))[0] == cli.EXIT_VALIDATION
    deg = tmp_path / "deg.txt"
    deg.write_text(cli.example_file("s4-canonical").replace("vertex E 0.0 0.0 0.0 1.0", "vertex E 0.0 0.0 1.0 0.0"))
    assert run(capsys, "invariant", str(deg))[0] == cli.EXIT_DEGENERACY
    codes = {cli.EXIT_PARSE, cli.EXIT_VALIDATION, cli.EXIT_DEGENERACY, cli.EXIT_NOT_ACYCLIC, cli.EXIT_FUZZ_TOLERANCE}
    assert len(codes) == 5 and 0 not in codes and cli.EXIT_USAGE not in codes


def test_exit_not_acyclic(capsys, tmp_path):
    path = write_example(tmp_path, "s4-canonical")
    # an absurd rank cutoff hides singular values, so exactness fails
    code, out, _ = run(capsys, "invariant", path, "--rank-tol", "0.9", "--json")
    assert code == cli.EXIT_NOT_ACYCLIC
    assert json.loads(out)["acyclicity"]["acyclic"] is False


def test_fuzz_command(capsys, tmp_path):
    path = write_example(tmp_path, "s4-canonical")
    code, out, _ = run(capsys, "fuzz", path, "--moves", "6", "--seed", "42", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["max_invariant_drift"] < 1e-6
    assert doc["max_ratio_residual"] < 1e-7
    assert len(doc["steps"]) == 6
    _, again, _ = run(capsys, "fuzz", path, "--moves", "6", "--seed", "42", "--json")
    assert strip_timing(json.loads(again)) == strip_timing(doc)


def test_fuzz_tolerance_exit(capsys, tmp_path):
    path = write_example(tmp_path, "s4-canonical")
    code, _, _ = run(capsys, "fuzz", path, "--moves", "2", "--seed", "1", "--tol-ratio", "0", "--tol-inv", "0")
    assert code == cli.EXIT_FUZZ_TOLERANCE


def test_move_mix_parsing():
    mix = cli.parse_move_mix("1-5=1,3-3=0.5")
    assert mix == {"1-5": 1.0, "5-1": 0.0, "2-4": 0.0, "4-2": 0.0, "3-3": 0.5}
    with pytest.raises(Exception):
        cli.parse_move_mix("7-7=1")


def test_fuzz_skips_when_nothing_applies():
    t, r = canonical_s4()
    res = fuzz(t, r, 3, seed=0, mix={"5-1": 1})
    assert [s.status for s in res.steps] == ["skipped"] * 3
    assert res.passed


def test_one_five_round_trip_text():
    t, r = canonical_s4()
    t1, r1, rec = move_1_5(t, r, 0, [0.2] * 5)
    (f,) = rec.created[0][0]
    t2, r2, _ = move_5_1(t1, r1, f)
    assert dumps(t2, r2) == dumps(t, r)


def test_parse_errors():
    for text in [
        "",
        "pl4-triangulation 2\n",
        "pl4-triangulation 1\nvertex A 0 0 0 x\n",
        "pl4-triangulation 1\nvertex A 0 0 0 0\nvertex A 1 0 0 0\n",
        "pl4-triangulation 1\nvertex A 0 0 0 0\nsimplex +1 A B C D E\n",
        "pl4-triangulation 1\nsimplex 2 A B C D E\n",
        "pl4-triangulation 1\nfoo\n",
        "pl4-triangulation 1\nvertex A nan 0 0 0\n",
    ]:
        with pytest.raises(ParseError):
            parse(text)


def test_frame_overrides_round_trip():
    t, r = canonical_s4()
    frames = random_frames(t, r, np.random.default_rng(3))
    doc = parse(dumps(t, r, frames))
    f2 = doc.frames()
    for v in frames.vertex:
        assert np.array_equal(f2.vertex[v], frames.vertex[v])
    for e in frames.edge:
        assert np.array_equal(f2.edge[e], frames.edge[e])
    assert evaluate(t, r, f2).torsion.abs_tau == pytest.approx(TAU_S4, rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=20, max_size=20))
def test_coordinates_round_trip(vals):
    t, _ = canonical_s4()
    from pl4torsion.triangulation import Realization

    r = Realization.from_mapping({v: vals[4 * i:4 * i + 4] for i, v in enumerate(t.vertices)})
    doc = parse(dumps(t, r))
    for v in t.vertices:
        assert np.array_equal(doc.realization[v], r[v])
