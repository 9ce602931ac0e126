"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import json
import subprocess
import sys
import time
from math import comb

import pytest

import frozen
from pslie import verify
from pslie.algebroid import TrivialAlgebroid, algebroid_betti
from pslie.catalog import algebras, complexes
from pslie.cealg import abelian, ce_betti
from pslie.psforms import ps_betti


@pytest.fixture
def report(capsys):
    def emit(number, title, ok):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title}")
        assert ok, title

    return emit


def test_criterion_1_square_zero(report):
    res = verify.check_square_zero()
    report(1, f"d∘d = 0 on {res['identities_checked']} complexes", res["passed"] and res["identities_checked"] == 3 * (3 + 6 + 18) + 3)


def test_criterion_2_quasi_isomorphism(report):
    res = verify.check_quasi_isomorphism()
    named = all(ps_betti(k, D) == frozen.SIMPLICIAL_BETTI[name] for name, k in complexes().items() for D in (1, 2))
    report(2, "ps_betti = simplicial_betti, δ∘I = I∘d, I∘W = id", res["passed"] and named)


def test_criterion_3_kunneth(report):
    res = verify.check_kunneth()
    example = algebroid_betti(TrivialAlgebroid(complexes()["boundary2"], algebras()["sl2"]), 2)
    ok = res["passed"] and len(res["cases"]) == 18 and example == frozen.KUNNETH[("boundary2", "sl2")]
    report(3, "algebroid Betti = convolution for all 18 pairs; ∂Δ²⊗sl₂ = (1,1,0,1,1)", ok)


def test_criterion_4_algebroid_axioms(report):
    res = verify.check_algebroid_axioms(seed=7)
    ok = res["passed"] and res["trials"] == 200 and set(res["holds"].values()) == {200}
    report(4, "antisymmetry, Jacobi, Leibniz, γ∘ι = id on 200 random sections", ok)


def test_criterion_5_koszul(report):
    res = verify.check_koszul(seed=7)
    ok = res["passed"] and [c["agree"] for c in res["cases"]] == [50, 50]
    report(5, "Koszul formula = tensor differential on 50 forms each for h₃, sl₂", ok)


def test_criterion_6_mayer_vietoris(report):
    res = verify.check_mayer_vietoris()
    ok = res["passed"] and len(res["cases"]) == 8 and res["boundary2_H0W_to_H1K_rank_by_D"] == {"1": 1, "2": 1}
    report(6, "MV short/long exactness on both splits; connecting rank 1", ok)


def test_criterion_7_ce(report):
    res = verify.check_ce(seed=7)
    binomial = all(ce_betti(abelian(m)) == tuple(comb(m, q) for q in range(m + 1)) for m in range(5))
    ok = (
        res["passed"]
        and binomial
        and ce_betti(algebras()["sl2"]) == frozen.CE_BETTI["sl2"]
        and ce_betti(algebras()["h3"]) == frozen.CE_BETTI["h3"]
        and res["non_lie"]["rejected"]
        and not res["non_lie"]["forced_square_zero"]
    )
    report(7, "CE Betti oracle values; non-Lie algebra rejected and d² ≠ 0", ok)


def test_criterion_8_determinism(report):
    cmd = [sys.executable, "-m", "pslie", "verify", "--seed", "7", "--json"]
    start = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True, check=False)
    elapsed = time.perf_counter() - start
    second = subprocess.run(cmd, capture_output=True, check=False)
    payload = json.loads(first.stdout)
    ok = (
        first.returncode == second.returncode == 0
        and first.stdout == second.stdout
        and payload["passed"]
        and elapsed < 120
    )
    report(8, f"verify --seed 7 byte-identical across runs ({elapsed:.0f}s each)", ok)
