"""Command-line front end.

Every command prints a plain-text report: the command line, a digest of the
input, then CHECK and RESULT lines.  The exit status is 0 iff no check
failed, 1 on a failed check and 2 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

from . import brace as br
from . import cycleset as cs
from . import endocable as ec
from . import perm
from . import search
from .report import Report


class UsageError(ValueError):
    pass


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _read(path: str) -> tuple[bytes, str]:
    with open(path, "rb") as fh:
        data = fh.read()
    return data, data.decode()


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    with open(path, "w") as fh:
        fh.write(text)


def _cycle_type(p: perm.Permutation) -> str:
    st = perm.cycle_structure(p)
    if p.n == 0 or p.is_identity():
        return "identity"
    if st.is_full_cycle:
        return f"{p.n}-cycle"
    return "cycle type " + "+".join(map(str, st.cycle_type))


def _mpl_text(level) -> str:
    return "INFINITE" if level == cs.INFINITE else str(level)


# -- commands --

def cmd_analyze(args, rep: Report) -> None:
    X = cs.parse(args.text)
    T = cs.diagonal(X)
    st = perm.cycle_structure(T)
    B = br.permutation_brace(X, seed=args.seed)
    level = cs.mpl(X)
    orbits, indecomposable = cs.decomposition(X)
    irreducible = cs.is_irreducible(X)
    retractable = cs.is_retractable(X)
    rep.result("n", X.n)
    rep.result("diagonal", _cycle_type(T))
    rep.result("diagonal_cycle_type", ",".join(map(str, st.cycle_type)))
    rep.result("order_T", st.order)
    rep.result("group_order", B.size)
    rep.result("dehornoy_class", br.dehornoy_class(B))
    rep.result("socle_order", len(br.socle(B)))
    rep.result("fix_order", len(br.fix(B)))
    rep.result("center_order", len(br.center(B)))
    rep.result("orbits", len(orbits))
    rep.result("decomposable", "no" if indecomposable else "yes")
    rep.result("irreducible", "yes" if irreducible else "no")
    rep.result("retractable", "yes" if retractable else "no")
    rep.result("tower_sizes", ",".join(str(Y.n) for Y in level.tower))
    rep.result("mpl", _mpl_text(level.level))
    summary = [f"T: {_cycle_type(T)}", "retractable" if retractable else "irretractable",
               f"mpl={_mpl_text(level.level)}"]
    if not indecomposable:
        summary += ["decomposable", f"|G|={B.size}"]
    else:
        pt = cs.pi_type(X, perm.PermGroup(X.n, X.sigma, B.perms, []))
        rep.result("primes_X", ",".join(map(str, sorted(pt.primes_x))) or "-")
        rep.result("primes_G", ",".join(map(str, sorted(pt.primes_g))) or "-")
        if pt.is_p_type:
            kind = f"{next(iter(pt.primes_x))}-type"
        else:
            kind = "pi-type" if pt.is_pi_type else "not pi-type"
        summary += [f"|G|={B.size}", kind]
    rep.check("order_T_divides_dehornoy_class", br.dehornoy_class(B) % st.order == 0)
    rep.result("summary", "; ".join(summary))


def cmd_retract(args, rep: Report) -> None:
    X = cs.parse(args.text)
    R, proj = cs.retract(X)
    rep.check("projection_is_homomorphism", proj.is_homomorphism())
    rep.result("classes", " | ".join(",".join(map(str, c)) for c in proj.fibers()))
    rep.result("retract_size", R.n)
    level = cs.mpl(X)
    rep.result("tower_sizes", ",".join(str(Y.n) for Y in level.tower))
    rep.result("mpl", _mpl_text(level.level))
    _write(args.output, cs.serialize(R))


def _selected_endo(X: cs.CycleSet, B: br.Brace, args):
    """The endomorphism and the predicted diagonal of the cabling."""
    T = cs.diagonal(X)
    if args.scalar is not None:
        return f"scalar[{args.scalar}]", ec.scalar_endo(B, args.scalar), T ** args.scalar
    z = args.central if args.central is not None else args.phi_z
    if not 0 <= z < B.size:
        raise UsageError(f"element index {z} out of range 0..{B.size - 1}")
    lz = B.perms[z]
    conj = perm.compose(lz.inverse(), perm.compose(T, lz))
    if args.central is not None:
        return f"lam[{z}]", ec.central_endo(B, z), conj
    # id - lambda_z cables to T after the inverse of the lambda_z-cabled diagonal
    return f"phi_z[{z}]", ec.phi_z(B, z), perm.compose(T, conj.inverse())


def cmd_cable(args, rep: Report) -> None:
    X = cs.parse(args.text)
    for step in range(args.iterate):
        B = br.permutation_brace(X, seed=args.seed)
        name, phi, predicted = _selected_endo(X, B, args)
        tag = f"step[{step + 1}].{name}"
        rep.result(f"{tag}.kind", "full" if phi.is_full else "relative" if phi.is_relative else "none")
        Xp = ec.endocable(X, phi)
        Tp = cs.diagonal(Xp)
        rep.result(f"{tag}.diagonal", Tp)
        rep.check(f"{tag}.diagonal_matches_closed_form", Tp == predicted, f"expected {predicted}")
        rep.result(f"{tag}.equals_input", "yes" if Xp == X else "no")
        X = Xp
    _write(args.output, cs.serialize(X))


def cmd_verify(args, rep: Report) -> None:
    if args.suite == "identities":
        if len(args.targets) != 1:
            raise UsageError("--suite identities takes one cycle-set file")
        X = cs.parse(args.text)
        rep.extend(ec.identity_suite(X, br.permutation_brace(X, seed=args.seed)))
        return
    if len(args.targets) != 2:
        raise UsageError("--suite theorem takes a theorem name and a size")
    name, n = args.targets[0].upper(), int(args.targets[1])
    try:
        out = search.verify_theorem(name, n, max_nodes=args.budget, max_seconds=args.seconds,
                                    extended=args.extended, threads=args.threads)
    except search.ExtendedRunRequired as exc:
        raise UsageError(str(exc)) from None
    rep.extend(out)
    if not out.exhaustive:
        rep.skip("exhaustive", f"budget exceeded after {out.count} solutions")


def cmd_search(args, rep: Report) -> None:
    model = search.parse_model(args.text)
    out = search.solve(model, args.mode, max_nodes=args.budget, max_seconds=args.seconds,
                       threads=args.threads)
    rep.result("status", out.status)
    rep.result("solutions", len(out.solutions))
    rep.result("nodes", out.stats.nodes)
    rep.result("propagations", out.stats.propagations)
    for k, X in enumerate(out.solutions):
        rep.check(f"solution[{k}].model", not search.check_model(model, X))
    _write(args.output, search.serialize_solutions(out.solutions))


def cmd_enumerate(args, rep: Report) -> None:
    sols = list(search.enumerate_cyclesets(args.n, diagonal=args.diagonal, up_to_iso=args.up_to_iso))
    rep.result("count", len(sols))
    rep.result("retractable", sum(cs.is_retractable(X) for X in sols))
    _write(args.output, search.serialize_solutions(sols))


def cmd_oracle(args, rep: Report) -> None:
    if args.which == "hol":
        if args.p is None or args.v is None:
            raise UsageError("oracle hol needs --p and --v")
        m = args.p ** args.v
        r = args.r if args.r is not None else args.p
        found = perm.classify_fixed_point_free(m, r)
        predicted = perm.predicted_fixed_point_free(m, r)
    else:
        if args.v is None:
            raise UsageError("oracle t2 needs --v")
        found = perm.shift_centralizer_involutions(args.v)
        predicted = perm.predicted_shift_centralizer_involutions(args.v)
    rep.result("count", len(found))
    for g in found:
        rep.result("element", g)
    for g in predicted:
        rep.result("predicted", g)
    rep.check("matches_closed_form", sorted(found) == sorted(predicted))


COMMANDS = {
    "analyze": cmd_analyze,
    "retract": cmd_retract,
    "cable": cmd_cable,
    "verify": cmd_verify,
    "search": cmd_search,
    "enumerate": cmd_enumerate,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="endocab", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for sampled axiom checks")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="invariants of a cycle set")
    a.add_argument("file")

    r = sub.add_parser("retract", help="retraction and the retraction tower")
    r.add_argument("file")
    r.add_argument("-o", "--output")

    c = sub.add_parser("cable", help="endocable a cycle set")
    c.add_argument("file")
    sel = c.add_mutually_exclusive_group(required=True)
    sel.add_argument("--scalar", type=int, metavar="K")
    sel.add_argument("--central", type=int, metavar="Z", help="index of a central brace element")
    sel.add_argument("--phi-z", type=int, metavar="Z", help="cable by id - lambda_Z")
    c.add_argument("--iterate", type=int, default=1, metavar="M")
    c.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="identity suite or theorem check")
    v.add_argument("--suite", choices=("identities", "theorem"), required=True)
    v.add_argument("targets", nargs="+", help="FILE, or THEOREM N")
    v.add_argument("--extended", action="store_true", help="allow the long n=16 run")
    v.add_argument("--budget", type=int, help="node budget")
    v.add_argument("--seconds", type=float, help="time budget")
    v.add_argument("--threads", type=int, default=1)

    s = sub.add_parser("search", help="solve a model file")
    s.add_argument("file")
    s.add_argument("--mode", choices=[m.value for m in search.Mode], default="all")
    s.add_argument("--budget", type=int, help="node budget")
    s.add_argument("--seconds", type=float, help="time budget")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("-o", "--output")

    e = sub.add_parser("enumerate", help="all cycle sets of a given size")
    e.add_argument("n", type=int)
    e.add_argument("--diagonal", help="'fullcycle' or comma-separated images")
    e.add_argument("--up-to-iso", action="store_true")
    e.add_argument("-o", "--output")

    o = sub.add_parser("oracle", help="holomorph classification oracles")
    o.add_argument("which", choices=("hol", "t2"))
    o.add_argument("--p", type=int)
    o.add_argument("--v", type=int)
    o.add_argument("--r", type=int, help="order bound (default p)")
    return p


def _input_file(args) -> str | None:
    if args.command == "verify":
        return args.targets[0] if args.suite == "identities" else None
    return getattr(args, "file", None)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "enumerate" and args.diagonal and args.diagonal != search.FULL_CYCLE:
        args.diagonal = [int(t) for t in args.diagonal.split(",")]
    rep = Report()
    print("COMMAND endocab " + " ".join(argv))
    try:
        path = _input_file(args)
        if path is not None:
            data, args.text = _read(path)
        else:
            data = " ".join(argv).encode()
        print("INPUT " + _digest(data))
        COMMANDS[args.command](args, rep)
    except (OSError, UnicodeDecodeError) as exc:
        sys.stdout.flush()
        print(f"ERROR {exc}", file=sys.stderr)
        return 2
    except (ValueError, perm.CapExceeded) as exc:
        # parse errors, inconsistent models, caps and bad selectors
        sys.stdout.flush()
        print(f"ERROR {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    finally:
        if rep.lines():
            print(rep)
    status = 0 if rep.ok else 1
    print(f"EXIT {status}")
    return status


if __name__ == "__main__":
    sys.exit(main())
