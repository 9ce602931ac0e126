"""The acceptance suite behind ``pslie verify``.

Each check returns a JSON-ready dict with a ``passed`` flag and the exact
values it compared. Nothing time- or machine-dependent goes into the output,
so two runs with the same seed serialize to identical bytes.
"""

from __future__ import annotations

import json
import random
from math import comb

from .algebroid import (
    TrivialAlgebroid,
    anchor,
    derivative,
    kunneth_check,
    koszul_check,
    random_algebroid_form,
    random_section,
    section_bracket,
    tangent_lift,
    tensor_complex,
)
from .catalog import COVERS, algebras, complexes, random_non_lie
from .cealg import JacobiError, abelian, ce_betti, ce_complex, ce_square_zero
from .mv import MVSetup, connecting_homomorphism, mv_exactness_report
from .psforms import certificate, ps_complex
from .simplicial import SimplicialComplex
from .sullivan import differential_matrix, random_polyform

# offsets keep the random streams of different checks independent
_STREAMS = {"sections": 101, "koszul": 202, "non_lie": 303}


def _rng(seed: int, stream: str) -> random.Random:
    return random.Random(seed * 1000 + _STREAMS[stream])


def _row(t) -> list[int]:
    return list(t)


def check_square_zero() -> dict:
    ks, gs = complexes(), algebras()
    failures = []
    count = 0
    for D in (0, 1, 2):
        for n in range(4):
            for p in range(n - 1):
                count += 1
                if not (differential_matrix(n, p + 1, D) @ differential_matrix(n, p, D)).is_zero():
                    failures.append(f"per-simplex n={n} p={p} D={D}")
        for kname, k in ks.items():
            count += 1
            if not ps_complex(k, D).check_square_zero():
                failures.append(f"piecewise {kname} D={D}")
            for gname, g in gs.items():
                count += 1
                if not tensor_complex(TrivialAlgebroid(k, g), D).check_square_zero():
                    failures.append(f"tensor {kname}⊗{gname} D={D}")
    for gname, g in gs.items():
        count += 1
        if not ce_complex(g).check_square_zero():
            failures.append(f"CE {gname}")
    return {"passed": not failures, "identities_checked": count, "failures": failures}


def check_quasi_isomorphism() -> dict:
    expected = {"boundary2": (1, 1), "boundary3": (1, 0, 1), "simplex1": (1, 0), "simplex2": (1, 0, 0), "simplex3": (1, 0, 0, 0)}
    rows = []
    for kname, k in complexes().items():
        for D in (1, 2):
            cert = certificate(k, D)
            named = expected.get(kname)
            rows.append({
                "complex": kname,
                "D": D,
                "ps_betti": _row(cert.ps_betti),
                "simplicial_betti": _row(cert.simplicial_betti),
                "I_after_W_identity": cert.integration_after_whitney_is_identity,
                "stokes": cert.stokes,
                "whitney_cochain_map": cert.whitney_is_cochain_map,
                "passed": cert.ok and (named is None or cert.ps_betti == named),
            })
    return {"passed": all(r["passed"] for r in rows), "cases": rows}


def check_kunneth(D: int = 2) -> dict:
    rows = []
    for kname, k in complexes().items():
        for gname, g in algebras().items():
            rep = kunneth_check(TrivialAlgebroid(k, g), D)
            rows.append({
                "pair": f"{kname}⊗{gname}",
                "tensor_betti": _row(rep.tensor_betti),
                "convolution": _row(rep.convolution),
                "passed": rep.ok,
            })
    example = next(r for r in rows if r["pair"] == "boundary2⊗sl2")
    example_ok = example["tensor_betti"] == [1, 1, 0, 1, 1]
    return {"passed": example_ok and all(r["passed"] for r in rows), "D": D, "boundary2_sl2": example["tensor_betti"], "cases": rows}


def check_algebroid_axioms(seed: int, trials: int = 200) -> dict:
    rng = _rng(seed, "sections")
    gs = list(algebras().items())
    tally = {"antisymmetry": 0, "jacobi": 0, "leibniz": 0, "anchor_split": 0}
    failures = []
    for t in range(trials):
        n = 1 + t % 3
        gname, g = gs[t % len(gs)]
        m = g.dim
        a, b, c = (random_section(rng, n, m, degree=1) for _ in range(3))
        f = random_polyform(rng, n, 0, 2)
        ab = section_bracket(g, a, b)
        ok = {
            "antisymmetry": ab == -section_bracket(g, b, a),
            "jacobi": section_bracket(g, ab, c) + section_bracket(g, section_bracket(g, b, c), a)
            + section_bracket(g, section_bracket(g, c, a), b) == type(a).zero(n, m),
            "leibniz": section_bracket(g, a, b.times(f)) == b.times(derivative(anchor(a), f)) + ab.times(f),
        }
        vec = tuple(random_polyform(rng, n, 0, 2) for _ in range(n))
        ok["anchor_split"] = anchor(tangent_lift(n, m, vec)) == vec
        for name, good in ok.items():
            tally[name] += good
            if not good:
                failures.append({"trial": t, "axiom": name, "n": n, "algebra": gname})
    return {"passed": not failures, "trials": trials, "holds": tally, "failures": failures[:10]}


def check_koszul(seed: int, forms: int = 50, D: int = 2) -> dict:
    rng = _rng(seed, "koszul")
    base = SimplicialComplex.simplex(2)
    top = base.top_simplices[0]
    rows = []
    for gname in ("h3", "sl2"):
        A = TrivialAlgebroid(base, algebras()[gname])
        agree = 0
        bad = []
        for t in range(forms):
            r = t % 3
            w = random_algebroid_form(rng, A, r, D)
            secs = [random_section(rng, 2, A.rank, degree=1) for _ in range(r + 1)]
            if koszul_check(w, top, secs).agree:
                agree += 1
            else:
                bad.append(t)
        rows.append({"algebra": gname, "forms": forms, "agree": agree, "disagreeing_trials": bad})
    return {"passed": all(not r["disagreeing_trials"] for r in rows), "base": "simplex2", "D": D, "cases": rows}


def check_mayer_vietoris() -> dict:
    ks, gs = complexes(), algebras()
    rows = []
    connecting = {}
    for cname, (kname, t1, t2) in COVERS.items():
        for coeff in (None, "sl2"):
            for D in (1, 2):
                s = MVSetup.from_tops(ks[kname], t1, t2, D, gs[coeff] if coeff else None)
                rep = mv_exactness_report(s)
                rows.append({
                    "cover": cname,
                    "coefficients": coeff or "trivial",
                    "D": D,
                    "D_used": rep.D_used,
                    "short_exact": rep.short_exact,
                    "long_exact": rep.long_exact,
                    "connecting_ranks": list(rep.connecting_ranks),
                    "connecting_well_defined": all(rep.connecting_well_defined),
                    "passed": rep.ok,
                })
                if cname == "boundary2_arcs" and coeff is None:
                    connecting[str(D)] = connecting_homomorphism(s, 0).rank
    passed = set(connecting.values()) == {1} and all(r["passed"] for r in rows)
    return {"passed": passed, "boundary2_H0W_to_H1K_rank_by_D": connecting, "cases": rows}


def check_ce(seed: int) -> dict:
    rows = []
    for m in range(5):
        got = ce_betti(abelian(m))
        rows.append({"algebra": f"abelian{m}", "betti": _row(got), "passed": got == tuple(comb(m, q) for q in range(m + 1))})
    for gname, want in (("sl2", (1, 0, 0, 1)), ("h3", (1, 2, 2, 1))):
        got = ce_betti(algebras()[gname])
        rows.append({"algebra": gname, "betti": _row(got), "passed": got == want})
    bad = random_non_lie(_rng(seed, "non_lie"))
    try:
        ce_betti(bad)
        rejected, triple = False, None
    except JacobiError as exc:
        rejected, triple = True, list(exc.triple)
    forced_square_zero = ce_square_zero(bad)
    non_lie = {
        "algebra": bad.to_json(),
        "rejected": rejected,
        "violating_triple": triple,
        "forced_square_zero": forced_square_zero,
        "passed": rejected and not forced_square_zero,
    }
    return {"passed": all(r["passed"] for r in rows) and non_lie["passed"], "cases": rows, "non_lie": non_lie}


def _seeded(seed: int) -> dict:
    return {
        "4": check_algebroid_axioms(seed),
        "5": check_koszul(seed),
        "7": check_ce(seed),
    }


CRITERIA = {
    "1": "differential soundness (d∘d = 0)",
    "2": "piecewise cohomology equals simplicial cohomology",
    "3": "Künneth for the trivial algebroid",
    "4": "Lie algebroid axioms on random sections",
    "5": "Koszul formula agrees with the tensor differential",
    "6": "Mayer-Vietoris exactness",
    "7": "Chevalley-Eilenberg oracle",
    "8": "determinism of the seeded checks",
}


def run(seed: int = 7) -> dict:
    seeded = _seeded(seed)
    results = {
        "1": check_square_zero(),
        "2": check_quasi_isomorphism(),
        "3": check_kunneth(),
        "4": seeded["4"],
        "5": seeded["5"],
        "6": check_mayer_vietoris(),
        "7": seeded["7"],
    }
    replay = _seeded(seed)
    results["8"] = {"passed": dumps(replay) == dumps(seeded), "replayed": sorted(seeded)}
    criteria = [{"id": int(k), "name": CRITERIA[k], **v} for k, v in sorted(results.items(), key=lambda kv: int(kv[0]))]
    return {"seed": seed, "passed": all(c["passed"] for c in criteria), "criteria": criteria}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1)


def summary_lines(result: dict) -> list[str]:
    return [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['id']}. {c['name']}" for c in result["criteria"]]
