import json
from fractions import Fraction

import pytest

from hopfbrace.cli import main
from hopfbrace.coeff import HSeries
from hopfbrace.io import (
    chain_from_json,
    chain_to_json,
    poly_from_json,
    poly_to_json,
    tensor_from_json,
    tensor_to_json,
)
from hopfbrace.liepair import abelian_pair, aff1_pair, check_invariance, UEnv
from hopfbrace.reporting import Report, jsonable, sample_rng
from hopfbrace.sampling import random_chain

Y, X = 0, 1


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_rng_is_replayable():
    a = [sample_rng(3, 7, "x").random() for _ in range(2)]
    b = [sample_rng(3, 7, "x").random() for _ in range(2)]
    assert a == b
    assert sample_rng(3, 7, "x").random() != sample_rng(3, 8, "x").random()


def test_report_tallies_and_merge():
    r = Report("a")
    r.record("c", True)
    r.record("c", False, seed=4, inputs={"x": (1, Fraction(1, 2))})
    assert (r.passed, r.failed, r.ok) == (1, 1, False)
    assert r.failures[0]["inputs"] == {"x": [1, "1/2"]}
    top = Report("top").merge(r)
    assert top.checks == {"a.c": [1, 1]}
    assert top.failures[0]["check"] == "a.c"


def test_jsonable_keys_are_strings():
    assert jsonable({(0, (1,)): Fraction(2)}) == {"(0, (1,))": "2/1"}


def test_random_chain_is_deterministic_and_invariant():
    P = aff1_pair()
    a = random_chain(P, 2, seed=11)
    b = random_chain(P, 2, seed=11)
    assert a.terms == b.terms and not a.empty
    assert a.certified and check_invariance(UEnv(P), a.terms, 2)[0]


def test_random_chain_note_on_empty(monkeypatch):
    # the unit chain is always invariant, so an empty space has to be simulated
    import hopfbrace.sampling as sampling

    monkeypatch.setattr(sampling, "invariant_basis", lambda *a, **k: [])
    ch = sampling.random_chain(aff1_pair(), 3)
    assert ch.empty and "no invariant chains" in ch.note


def test_chain_json_roundtrip():
    A = {(0, ((X,), (Y,), ())): Fraction(1), (1, ((X,), (Y,), ())): Fraction(-1, 2), (2, ((), (), (Y,))): Fraction(3)}
    data = json.loads(json.dumps(chain_to_json(A)))
    assert data["degree"] == 2
    assert chain_from_json(data) == (A, 2)


def test_chain_json_rejects_ragged_terms():
    data = {"terms": [{"gfactors": [[0]], "lfactor": []}, {"gfactors": [[0], [1]], "lfactor": []}]}
    with pytest.raises(ValueError):
        chain_from_json(data)


def test_chain_json_default_coefficient():
    assert chain_from_json({"terms": [{"gfactors": [[1]], "lfactor": [0]}]}) == ({(0, ((1,), (0,))): 1}, 1)


def test_tensor_and_witness_roundtrip():
    x = {(0, ((0,), (((), (1,)), ((), (0,))))): Fraction(1, 3), (2, ((1,), (((0,), (0,)), ((), (2,))))): Fraction(-2)}
    assert tensor_from_json(json.loads(json.dumps(tensor_to_json(x, 2)))) == x
    assert tensor_from_json(jsonable(x)) == x


def test_poly_roundtrip():
    f = {(0, ((2, 0), ())): Fraction(1), (1, ((2, 0), ())): Fraction(1, 2), (0, ((0, 1), ())): Fraction(-1)}
    assert poly_from_json(json.loads(json.dumps(poly_to_json(f)))) == f
    assert poly_from_json([[[1], "3/2"]]) == {(0, ((1,), ())): Fraction(3, 2)}


def test_cli_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "binf", "--model", "ks3", "--trials", "5", "--degree", "2")
    assert code == 0 and out.startswith("PASS")


def test_cli_usage_errors(capsys):
    assert run(capsys, "verify", "nope")[0] == 2
    assert run(capsys, "verify", "operad", "--model", "nope")[0] == 2
    assert run(capsys, "verify", "wgl", "--pair", "missing.toml")[0] == 2
    assert run(capsys, "verify", "mutation")[0] == 2
    assert run(capsys, "compute", "star", "--pair", "aff1")[0] == 2


def test_cli_bad_twistor_exits_one(tmp_path, capsys):
    F = {(0, ((0,), (((), (0,)), ((), (0,))))): Fraction(1), (1, ((0,), (((), (1,)), ((), (0,))))): Fraction(1)}
    path = tmp_path / "F.json"
    path.write_text(json.dumps(tensor_to_json(F, 2)))
    code, out, _ = run(capsys, "verify", "twistor", "--model", "weyl1", "--order", "2", "--input", str(path), "--format", "json")
    assert code == 1
    assert {w["check"] for w in json.loads(out)["failures"]} == {"twistor_equation", "counit_equation"}


def test_cli_witness_can_be_fed_back(tmp_path, capsys):
    K = {(0, ((), (), ())): Fraction(1), (1, ((X,), (), ())): Fraction(1)}
    path = tmp_path / "K.json"
    path.write_text(json.dumps(chain_to_json(K)))
    code, out, _ = run(capsys, "verify", "adte", "--pair", "aff1", "--input", str(path), "--format", "json")
    assert code == 1
    witness = json.loads(out)["failures"][0]["inputs"]["K"]
    again = tmp_path / "witness.json"
    again.write_text(json.dumps(witness))
    assert chain_from_json(witness)[0] == K
    assert run(capsys, "verify", "adte", "--pair", "aff1", "--input", str(again))[0] == 1


def test_cli_compute_c_of_m_is_theta_gutt(capsys):
    code, out, _ = run(capsys, "compute", "c", "--pair", "aff1")
    code2, out2, _ = run(capsys, "compute", "theta-gutt", "--pair", "aff1")
    assert code == code2 == 0
    assert tensor_from_json(json.loads(out)) == tensor_from_json(json.loads(out2))


def test_cli_compute_star(tmp_path, capsys):
    path = tmp_path / "fg.json"
    path.write_text(json.dumps({"f": [[[1, 0], "1"]], "g": [[[0, 1], "1"]]}))
    code, out, _ = run(capsys, "compute", "star", "--pair", "aff1full", "--input", str(path))
    assert code == 0
    assert poly_from_json(json.loads(out)) == {(0, ((1, 1), ())): 1, (1, ((0, 1), ())): Fraction(1, 2)}


def test_cli_random_chain_with_toml_pair(tmp_path, capsys):
    from hopfbrace.io import dump_pair

    path = tmp_path / "aff1.toml"
    path.write_text(dump_pair(aff1_pair()))
    code, out, _ = run(capsys, "compute", "random-chain", "--pair", str(path), "--degree", "1", "--seed", "4")
    assert code == 0
    data = json.loads(out)
    assert data["certified"] and chain_from_json(data)[1] == 1


def test_cli_output_file(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert run(capsys, "verify", "star", "--pair", "aff1", "--order", "2", "--degree", "2", "--format", "json", "-o", str(out))[0] == 0
    assert json.loads(out.read_text())["suite"].startswith("star")


def test_report_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "report", "--criteria", "6", "7", "-o", str(a))[0] == 0
    assert run(capsys, "report", "--criteria", "6", "7", "-o", str(b))[0] == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "checks.png").stat().st_size > 0 and (a / "timing.png").exists()


def test_hseries_json_in_chain_coefficients():
    data = {"terms": [{"gfactors": [], "lfactor": [0], "coeff": HSeries({1: 2}, 0, 3).to_json()}]}
    assert chain_from_json(data) == ({(1, ((0,),)): 2}, 0)
