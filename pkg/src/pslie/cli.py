"""Command-line entry point.

Exit codes: 0 success, 2 input fault, 3 internal invariant violation,
4 mathematical validation failure (Jacobi, or a failing verify check).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import verify
from .algebroid import TrivialAlgebroid, koszul_check, kunneth_check, random_algebroid_form, random_section
from .cealg import JacobiError, LieAlgebra, ce_betti, validate
from .exactla import StructuralError, format_scalar
from .mv import MVSetup, TruncationObstruction, mv_exactness_report
from .psforms import certificate, ps_betti
from .simplicial import InputError, SimplicialComplex, simplicial_betti

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_MATH = 0, 2, 3, 4


class MathFailure(Exception):
    """A validation verdict that should end the run with exit code 4."""


def fmt_betti(b) -> str:
    return "(" + ",".join(str(x) for x in b) + ")"


def emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1))
    else:
        print("\n".join(lines))


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None


def load_complex(path) -> SimplicialComplex:
    return SimplicialComplex.from_json(_load_json(path))


def load_algebra(path) -> LieAlgebra:
    return LieAlgebra.from_json(_load_json(path), name=str(path))


def load_cover(path, K: SimplicialComplex, D: int, fiber: LieAlgebra | None) -> MVSetup:
    obj = _load_json(path)
    if not isinstance(obj, dict) or not {"K1", "K2"} <= set(obj):
        raise InputError('cover JSON must be an object with "K1" and "K2" lists of top simplices')
    for key in ("K1", "K2"):
        if not isinstance(obj[key], list) or not all(isinstance(t, list) for t in obj[key]):
            raise InputError(f'"{key}" must be a list of integer lists')
    return MVSetup.from_tops(K, obj["K1"], obj["K2"], D, fiber)


def _pmax(args, default: int) -> int:
    return default if args.max_degree is None else args.max_degree


def cmd_betti(args) -> None:
    k = load_complex(args.complex)
    pmax = _pmax(args, max(k.dim, 0))
    levels, lines = [], []
    for D in (args.coeff_degree, args.coeff_degree + 1):
        ps, simp = ps_betti(k, D, pmax), simplicial_betti(k, pmax)
        cert = certificate(k, D)
        verdict = "vacuous" if k.is_empty() else ("OK" if cert.ok else "FAILED")
        levels.append({
            "D": D,
            "ps_betti": list(ps),
            "simplicial_betti": list(simp),
            "certificate": verdict,
            "I_after_W_identity": cert.integration_after_whitney_is_identity,
            "stokes": cert.stokes,
            "whitney_cochain_map": cert.whitney_is_cochain_map,
        })
        lines.append(f"D={D}: {fmt_betti(ps)} | simplicial {fmt_betti(simp)} | certificate {verdict}")
    stable = levels[0]["ps_betti"] == levels[1]["ps_betti"]
    lines.append(f"stable from D={args.coeff_degree} to D={args.coeff_degree + 1}: {'yes' if stable else 'no'}")
    emit(args, {"complex": str(args.complex), "levels": levels, "stable": stable}, lines)


def _violation(g: LieAlgebra):
    bad = validate(g)
    if bad is None:
        return None
    i, j, k = bad.triple
    value = "(" + ", ".join(format_scalar(x) for x in bad.value) + ")"
    return bad, f"Jacobi violated at ({i},{j},{k}): [[x{i},x{j}],x{k}] + cyclic = {value}"


def cmd_ce(args) -> None:
    g = load_algebra(args.liealg)
    found = _violation(g)
    if found is not None:
        bad, msg = found
        emit(args, {"jacobi": False, "triple": list(bad.triple), "value": [format_scalar(x) for x in bad.value]}, [msg])
        raise MathFailure()
    b = ce_betti(g)
    emit(args, {"jacobi": True, "betti": list(b)}, [f"Jacobi OK; Betti {fmt_betti(b)}"])


def _koszul_samples(A: TrivialAlgebroid, D: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    top = A.base.top_simplices[0]
    n = len(top) - 1
    out = []
    for r in range(min(2, n + A.rank - 1) + 1):
        w = random_algebroid_form(rng, A, r, D)
        secs = [random_section(rng, n, A.rank, degree=1) for _ in range(r + 1)]
        out.append({"degree": r, "simplex": list(top), "agree": koszul_check(w, top, secs).agree})
    return out


def cmd_algebroid(args) -> None:
    k = load_complex(args.complex)
    g = load_algebra(args.liealg)
    found = _violation(g)
    if found is not None:
        bad, msg = found
        emit(args, {"jacobi": False, "triple": list(bad.triple)}, [msg])
        raise MathFailure()
    A = TrivialAlgebroid(k, g)
    rep = kunneth_check(A, args.coeff_degree)
    samples = [] if k.is_empty() else _koszul_samples(A, args.coeff_degree, args.seed)
    lines = [
        f"Betti {fmt_betti(rep.tensor_betti)}",
        f"Künneth {'OK' if rep.ok else 'FAILED'}: base {fmt_betti(rep.base_betti)} * fiber {fmt_betti(rep.fiber_betti)}"
        f" = {fmt_betti(rep.convolution)}",
    ]
    lines += [f"koszul degree {s['degree']} on {s['simplex']}: {'agree' if s['agree'] else 'DISAGREE'}" for s in samples]
    payload = {
        "betti": list(rep.tensor_betti),
        "base_betti": list(rep.base_betti),
        "fiber_betti": list(rep.fiber_betti),
        "convolution": list(rep.convolution),
        "kunneth": rep.ok,
        "koszul_samples": samples,
        "D": args.coeff_degree,
    }
    emit(args, payload, lines)
    if not rep.ok or not all(s["agree"] for s in samples):
        raise StructuralError("tensor complex disagrees with Künneth or the Koszul formula")


def cmd_mv(args) -> None:
    k = load_complex(args.complex)
    g = None
    if args.liealg is not None:
        g = load_algebra(args.liealg)
        found = _violation(g)
        if found is not None:
            raise MathFailure(found[1])
    s = load_cover(args.cover, k, args.coeff_degree, g)
    rep = mv_exactness_report(s, args.max_degree)
    lines = [
        f"cover: {rep.cover}",
        f"coefficients: {rep.coefficients}; D requested {rep.D_requested}, used {rep.D_used} (level {rep.level})",
        "degree  dim K  dim K1+K2  dim W  rank i  rank j  exact",
    ]
    for r in rep.degrees:
        lines.append(f"{r.degree:>6}  {r.dim_K:>5}  {r.dim_middle:>9}  {r.dim_W:>5}  {r.rank_i:>6}  {r.rank_j:>6}  {'yes' if r.exact else 'NO'}")
    lines.append("connecting ranks: " + ", ".join(f"H^{p}(W)->H^{p + 1}(K) {c}" for p, c in enumerate(rep.connecting_ranks)))
    for n in rep.les:
        lines.append(f"  {n.label:<12} r={n.degree}  dim {n.dim}  in {n.rank_in}  out {n.rank_out}  {'exact' if n.exact else 'NOT EXACT'}")
    lines.append(f"short exact: {rep.short_exact}; long exact: {rep.long_exact}")
    lines += [f"note: {x}" for x in rep.notes]
    emit(args, rep.to_json(), lines)


def cmd_verify(args) -> None:
    result = verify.run(args.seed)
    if args.json:
        print(verify.dumps(result))
    else:
        print("\n".join(verify.summary_lines(result)))
    if not result["passed"]:
        raise MathFailure()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coeff-degree", type=int, default=2, metavar="D", help="coefficient cap D (default 2)")
    common.add_argument("--max-degree", type=int, default=None, metavar="p", help="highest form degree reported")
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    common.add_argument("--seed", type=int, default=7, metavar="N", help="seed for sampled checks (default 7)")

    parser = argparse.ArgumentParser(prog="pslie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("betti", parents=[common], help="piecewise vs simplicial Betti numbers")
    p.add_argument("complex")
    p.set_defaults(func=cmd_betti)
    p = sub.add_parser("ce-betti", parents=[common], help="Jacobi check and Lie algebra cohomology")
    p.add_argument("liealg")
    p.set_defaults(func=cmd_ce)
    p = sub.add_parser("algebroid-betti", parents=[common], help="cohomology of the trivial algebroid K × g")
    p.add_argument("complex")
    p.add_argument("liealg")
    p.set_defaults(func=cmd_algebroid)
    p = sub.add_parser("mv-report", parents=[common], help="Mayer-Vietoris exactness for a two-piece cover")
    p.add_argument("complex")
    p.add_argument("cover")
    p.add_argument("liealg", nargs="?")
    p.set_defaults(func=cmd_mv)
    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.coeff_degree < 0 or (args.max_degree is not None and args.max_degree < 0):
        print("error: --coeff-degree and --max-degree must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MathFailure, JacobiError) as exc:
        if str(exc):  # MathFailure without a message has already been reported on stdout
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (StructuralError, TruncationObstruction) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
