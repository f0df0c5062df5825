"""Smoke tests for the pyeinstein module built by CMake."""
import json
import math

import pyeinstein as pe


def test_bi_invariant_ricci():
    rc = pe.ricci("group", 1, 2, 2, [1, 1, 1, 1, 1, 1, 1, 1])
    for k in (2, 3, 4, 5, 6, 7, 8):
        assert abs(rc[f"r{k}"] - 0.25) < 1e-14
    assert abs(rc["r0"]) < 1e-14
    assert pe.certify("group", 1, 2, 2, [1, 1, 1, 1, 1, 1, 1, 1], 0.25) < 1e-12


def test_constants():
    tables = pe.constants(1, 2, 2)
    b = {(e["k"], e["i"], e["j"]): e for e in tables["B"]}
    assert b[(2, 2, 2)]["exact"] == "6/5"
    assert abs(b[(6, 7, 8)]["value"] - 0.8) < 1e-15  # the joint [6;78] entry
    q = {(e["k"], e["i"], e["j"]): e for e in tables["Q"]}
    assert q[(5, 7, 7)]["exact"] == "4/15"


def test_solve_su4():
    r = pe.solve("group", 1, 1, 2)
    assert len(r["solutions"]) == 2
    exact = sorted(s.get("exact_form", "") for s in r["solutions"])
    assert exact == ["x6=1", "x6=5/11"]
    for s in r["solutions"]:
        assert s["residual"] < 1e-9
        assert s["classification"]["naturally_reductive"]


def test_solve_v2c4_jensen():
    r = pe.solve("stiefel", 1, 1, 2)
    assert len(r["solutions"]) == 2
    for s in r["solutions"]:
        assert s["classification"]["jensen_type"]
        x6 = s["params"]["x6"]
        assert min(abs(x6 - (4 - math.sqrt(6)) / 4), abs(x6 - (4 + math.sqrt(6)) / 4)) < 1e-12


def test_verify_roundtrip_and_determinism():
    j1 = pe.solve_json("stiefel", 1, 2, 2, "auto", 0, 64)
    j2 = pe.solve_json("stiefel", 1, 2, 2, "auto", 0, 64)
    assert j1 == j2
    rep = pe.verify(j1)
    assert rep["all_pass"]
    doc = json.loads(j1)
    assert len(doc["solutions"]) == 4


def test_classify():
    c = pe.classify("group", 1, 2, 2, [1, 1, 1, 1, 1, 1, 1, 1])
    assert c["naturally_reductive"] and c["nr_case"] == "bi-invariant"
    c2 = pe.classify("stiefel", 1, 1, 2, [1, 1, 1, 1.8, 0.55, 0.55, 1, 1])
    assert c2["jensen_type"]


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"ok   {name}")
            except AssertionError as exc:
                failures += 1
                print(f"FAIL {name}: {exc}")
    raise SystemExit(1 if failures else 0)
