from __future__ import annotations

import json
import os
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

import gen
from transdim.cli import run
from transdim.errors import ArityViolation, NotPurelyLarge, OutOfFragment, ParseError
from transdim.parser import parse_diffpoly, parse_transseries, parse_unipoly
from transdim.transseries import X, Transseries, dominant_monomial, exp_large

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("TRANSDIM_REGEN_GOLDEN") == "1"

# name -> argv; paths are relative to tests/golden
CASES: dict[str, list[str]] = {
    "ts_eval_x": ["ts-eval", "--f", "1/1 * x"],
    "ts_eval_exp_plus_power": ["ts-eval", "--f", "exp(x) + x^(11/1)"],
    "ts_eval_log_sugar": ["ts-eval", "--f", "log(log(x)) * x^(1/2)"],
    "ts_eval_not_purely_large": ["ts-eval", "--f", "exp(1)"],
    "ts_eval_syntax": ["ts-eval", "--f", "2x"],
    "ts_eval_out_of_fragment": ["ts-eval", "--f", "log(x+1)"],
    "ts_eval_derivative": ["ts-eval", "--f", "D2(exp(x^2))"],
    "ts_compare_zero": ["ts-compare", "--f", "x", "--g", "exp(l1)"],
    "ts_compare_neg": ["ts-compare", "--f", "x^100", "--g", "exp(l1^2)"],
    "ts_compare_pos": ["ts-compare", "--f", "exp(exp(x))", "--g", "exp(x^2)"],
    "ts_lambda_false": ["ts-lambda", "--f", "2 * x^(-1/1)"],
    "ts_lambda_true": ["ts-lambda", "--f", "x^(-1) + x^(-1)*l1^(-1)"],
    "ts_omega_true": ["ts-omega", "--f", "x^(-2)"],
    "dp_eval_zero": ["dp-eval", "--P", "Y*D2(Y)-D1(Y)^2", "--point", "3*exp(2*x)"],
    "dp_eval_nonzero": ["dp-eval", "--P", "Y*D2(Y)-D1(Y)^2", "--point", "x"],
    "dp_eval_arity_violation": ["dp-eval", "--P", "D1(Y3)", "--point", "x; x"],
    "dp_separant": ["dp-separant", "--P", "(Y^2+1)*D1(Y) - 3*Y"],
    "codim_rank_system": ["codim-rank", "--P", "D1(Y1) - Y2", "--P", "D1(Y2)", "--point", "exp(x); 0"],
    "codim_rank_zero_set": ["codim-rank", "--P", "Y*D2(Y)-D1(Y)^2", "--point", "0"],
    "codim_strong_indep": ["codim-strong-indep", "--P", "Y*D2(Y)-D1(Y)^2", "--point", "3*exp(2*x)", "--lower-bound"],
    "codim_not_vanishing": ["codim-strong-indep", "--P", "Y*D2(Y)-D1(Y)^2", "--point", "x", "--lower-bound"],
    "dim_eval_prod": ["dim-eval", "--set", "prod(const 2, full 1)"],
    "dim_eval_union_proj": ["dim-eval", "--set", "union(full 1, proj(full 3, 1))"],
    "dim_eval_arity_clash": ["dim-eval", "--set", "union(full 2, proj(full 3, 1))"],
    "dim_eval_zero": ["dim-eval", "--set", "zero {Y*D2(Y)-D1(Y)^2} 1", "--member", "3*exp(2*x)"],
    "dim_eval_malformed": ["dim-eval", "--set", "union(full 2"],
    "rosenlicht_decide_log": ["rosenlicht-decide", "--F", "1", "--G", "Y"],
    "rosenlicht_decide_exact": ["rosenlicht-decide", "--F", "1", "--G", "Y^2"],
    "rosenlicht_decide_none": ["rosenlicht-decide", "--F", "Y+1", "--G", "Y^2-2"],
    "rosenlicht_decide_not_coprime": ["rosenlicht-decide", "--F", "Y", "--G", "Y^2"],
    "rosenlicht_certify_log": ["rosenlicht-certify", "--F", "1", "--G", "Y"],
    "rosenlicht_certify_none": ["rosenlicht-certify", "--F", "Y+1", "--G", "Y^2-2"],
    "rosenlicht_verify_file": ["rosenlicht-verify", "--F", "1", "--G", "Y", "--points", "data/points.txt"],
    "rosenlicht_verify_inline": ["rosenlicht-verify", "--F", "1", "--G", "1", "--point", "x+3"],
    "coan_check_pass": ["coan-check", "--structure", "data/s4.json"],
    "coan_check_fail": ["coan-check", "--structure", "data/s4_tight.json"],
    "coan_check_bad_shape": ["coan-check", "--structure", "data/bad_shape.json"],
    "coan_check_broken_json": ["coan-check", "--structure", "data/broken.json"],
    "coan_decide_true": ["coan-decide", "--structure", "data/s4.json", "--r", "1", "--e", "2"],
    "coan_decide_false": ["coan-decide", "--structure", "data/s5.json", "--r", "1", "--e", "2"],
    "coan_demo": ["coan-demo"],
    "usage_missing_subcommand": [],
    "usage_unknown_flag": ["ts-eval", "--bogus", "1"],
    "max_size_guard": ["--max-size", "1", "codim-rank", "--P", "D1(Y1) - Y2", "--P", "D1(Y2)", "--point", "exp(x); 0"],
}


def _golden_doc(name: str) -> dict:
    status, text = run(CASES[name])
    return {"argv": CASES[name], "status": status, "stdout": text}


@pytest.fixture
def in_golden(monkeypatch):
    monkeypatch.chdir(GOLDEN)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name: str, in_golden) -> None:
    path = GOLDEN / "expected" / f"{name}.json"
    doc = _golden_doc(name)
    if REGEN:
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    expected = json.loads(path.read_text())
    assert doc == expected
    assert doc["status"] != 3


def test_golden_count():
    assert len(CASES) >= 25
    assert len(list((GOLDEN / "expected").glob("*.json"))) == len(CASES)


def test_spec_cli_examples(in_golden):
    assert run(CASES["dp_eval_zero"]) == (0, '{"value":"0"}')
    assert run(CASES["ts_lambda_false"]) == (0, '{"member":false}')
    status, text = run(CASES["dim_eval_prod"])
    assert status == 0 and json.loads(text) == {"lo": 1, "hi": 1, "discrete": "NotDiscrete"}
    assert run(CASES["ts_eval_not_purely_large"])[0] == 1
    assert run(CASES["ts_eval_syntax"])[0] == 2
    assert run(CASES["usage_missing_subcommand"])[0] == 2


def test_determinism_in_process(in_golden):
    for argv in CASES.values():
        assert run(argv) == run(argv)


def test_console_entry_point_byte_stable(in_golden):
    argv = [sys.executable, "-m", "transdim", *CASES["codim_rank_system"]]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert a.stdout.decode().strip() == run(CASES["codim_rank_system"])[1]
    bad = subprocess.run([sys.executable, "-m", "transdim", "ts-eval", "--f", "2x"], capture_output=True, check=False)
    assert bad.returncode == 2 and json.loads(bad.stdout)["error"] == "SyntaxError"


# -- parser ------------------------------------------------------------------


def test_parse_examples():
    assert parse_transseries("1/1 * x") == X
    f = parse_transseries("exp(x) + x^(11/1)")
    assert f == exp_large(X) + X**11 and dominant_monomial(f) == dominant_monomial(exp_large(X))
    with pytest.raises(NotPurelyLarge):
        parse_transseries("exp(1)")
    assert parse_transseries("log(x)") == Transseries.ell(1)
    assert parse_transseries("log(l2)") == Transseries.ell(3)
    with pytest.raises(OutOfFragment):
        parse_transseries("1/(x+1)")
    assert parse_diffpoly("D1(Y1) - Y2", 2).render() == parse_diffpoly("-Y2 + D1(Y1)", 2).render()
    with pytest.raises(ArityViolation):
        parse_diffpoly("D1(Y3)", 2)
    assert parse_unipoly("Y^2 - 2").coeffs == (Fraction(-2), Fraction(0), Fraction(1))


@pytest.mark.parametrize("text,pos", [("2x", 1), ("x+", 2), ("(x", 2), ("x)", 1), ("exp(", 4)])
def test_parse_error_positions(text: str, pos: int):
    with pytest.raises(ParseError) as info:
        parse_transseries(text)
    assert info.value.position == pos


def test_transseries_round_trip():
    rng = random.Random(81)
    for _ in range(500):
        f = gen.transseries(rng, terms=4, height=2)
        assert parse_transseries(f.render()) == f


# -- fuzzing -----------------------------------------------------------------

SEEDS = {
    "ts-eval": ["--f", ["exp(x^2) - 3/4*l1^(1/2)", "D3(exp(exp(x)))*x", "log(log(x))^(2/3) + 1"]],
    "ts-lambda": ["--f", ["x^(-1) + x^(-1)*l1^(-1)", "exp(-x)"]],
    "dp-eval": ["--P", ["Y*D2(Y)-D1(Y)^2", "(Y^2+1)*D1(Y) - 3*Y", "exp(x)*Y^3"]],
    "dim-eval": ["--set", ["union(full 2, proj(prod(const 1, full 2), 2))", "perm([2,1], zero {D1(Y1)-Y2; D1(Y2)} 2)"]],
    "rosenlicht-decide": ["--F", ["Y^2 - 3/2*Y + 1", "Y+1", "2*Y"]],
    "dp-separant": ["--P", ["Y*D2(Y)-D1(Y)^2", "D1(Y)^3 + Y"]],
}
ALPHABET = "xYlD0123456789()+-*/^,;{}[]|. expfulconstzerorpj"


def _mutate(rng: random.Random, s: str) -> str:
    s = list(s)
    for _ in range(rng.randint(1, 4)):
        op = rng.random()
        i = rng.randrange(len(s) + 1)
        if op < 0.4 and s:
            del s[min(i, len(s) - 1)]
        elif op < 0.8:
            s.insert(i, rng.choice(ALPHABET))
        else:
            s[i:i] = list(rng.choice(["(", ")", "^(", "exp(", "D9", "Y7", "1/0", "^99", "{", "zero"]))
    return "".join(s)


def fuzz_corpus(seed: int = 83, size: int = 10_000) -> list[list[str]]:
    rng = random.Random(seed)
    out = []
    cmds = sorted(SEEDS)
    while len(out) < size:
        cmd = rng.choice(cmds)
        flag, texts = SEEDS[cmd]
        text = _mutate(rng, rng.choice(texts))
        argv = [cmd, flag, text]
        if cmd == "dp-eval":
            argv += ["--point", _mutate(rng, "3*exp(2*x)") if rng.random() < 0.5 else "x"]
        elif cmd == "rosenlicht-decide":
            argv += ["--G", _mutate(rng, "Y^2 - 2") if rng.random() < 0.5 else "Y"]
        out.append(argv)
    return out


def run_fuzz(corpus: list[list[str]]) -> dict[int, int]:
    statuses: dict[int, int] = {}
    for argv in corpus:
        status, text = run(argv)
        statuses[status] = statuses.get(status, 0) + 1
        doc = json.loads(text)
        if status != 0:
            assert set(doc) <= {"error", "detail", "position"} and "error" in doc and "detail" in doc, argv
        assert status != 3, (argv, text)
    return statuses


def test_fuzz_corpus_structured_errors():
    statuses = run_fuzz(fuzz_corpus())
    assert statuses.get(3, 0) == 0
    assert statuses.get(1, 0) + statuses.get(2, 0) > 5_000
