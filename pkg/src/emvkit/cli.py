"""Command-line front end: ``emvkit <command> <spec.json> ...`` writes a JSON report."""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .algebra import EMVAlgebra, FiniteEMV, FinSubsets, Representing, build, verify_axioms
from .errors import EMVError, UnsupportedCarrier
from .measures import jordan_lattice, morphism_id, strong_join_T
from .ratlp import rat_str
from .serialize import (
    dumps,
    element_set,
    load_json,
    plain,
    state_from_json,
    symbolic_from_json,
    symbolic_to_json,
    values_from_json,
    vector_to_json,
)
from .states import (
    check_state,
    classify_prestate,
    horn_tarski_extend,
    km_decompose,
    kernel,
    state_morphisms,
)
from .structure import direct_image_witness, radical_and_infinitesimals


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _finite(M: EMVAlgebra, what: str) -> FiniteEMV:
    if not isinstance(M, FiniteEMV):
        raise UnsupportedCarrier(f"{what} needs a finite carrier")
    return M


def summary(M: EMVAlgebra, spec: dict) -> dict:
    if isinstance(M, FiniteEMV):
        return {
            "kind": spec.get("kind"),
            "size": M.n,
            "idempotents": len(M.idempotents),
            "top": None if M.top is None else M.label(M.top),
        }
    top = M.top
    return {"kind": spec.get("kind"), "size": "infinite", "idempotents": "infinite",
            "top": None if top is None else M.to_json(top)}


# ---------------------------------------------------------------------------
# commands

def cmd_verify(M, args):
    rep = verify_axioms(M, args.budget, seed=args.seed)
    return {
        "violations": [
            {"axiom": v.axiom, "witness": [M.to_json(x) for x in v.witness], "detail": v.detail}
            for v in rep.violations
        ],
        "checked": rep.checked_counts,
        "sampled": rep.sampled,
    }


def cmd_morphisms(M, args):
    M = _finite(M, "morphisms")
    return {"morphisms": [
        {"id": morphism_id(k), "kernel": element_set(M, kernel(M, m)), "values": vector_to_json(M, m)}
        for k, m in enumerate(state_morphisms(M))
    ]}


def cmd_states(M, args):
    f = state_from_json(M, load_json(args.check))
    if not isinstance(M, FiniteEMV):
        return {"class": str(classify_prestate(M, f, budget=args.budget))}
    rep = check_state(M, f)
    return {
        "is_additive": rep.is_additive,
        "in_range": rep.in_range,
        "attains_one": rep.attains_one,
        "is_state": rep.is_state,
        "is_morphism": rep.is_morphism,
        "is_extremal": rep.is_extremal,
        "kernel": element_set(M, rep.kernel),
        "kernel_is_maximal": rep.kernel_is_maximal,
        "witnesses": {k: [M.label(x) for x in w] for k, w in sorted(rep.witnesses.items())},
    }


def cmd_decompose(M, args):
    M = _finite(M, "decompose")
    s = state_from_json(M, load_json(args.state))
    weights = km_decompose(M, s)
    morphs = state_morphisms(M)
    return {
        "weights": {morphism_id(k): rat_str(w) for k, w in enumerate(weights)},
        "morphisms": {morphism_id(k): vector_to_json(M, m) for k, m in enumerate(morphs)},
    }


def cmd_extend(M, args):
    M = _finite(M, "extend")
    sub = load_json(args.sub)
    if not isinstance(sub, list):
        raise UsageError("--sub must be a JSON list of elements")
    M0 = {M.from_json(x) for x in sub}
    s0 = values_from_json(M, load_json(args.state), partial=True)
    ext = horn_tarski_extend(M, M0, s0, morphism=args.morphism)
    return {"extension": vector_to_json(M, ext)}


def cmd_represent(M, args):
    if isinstance(M, Representing):
        N = M
    else:
        from .structure import representing_mv

        N = representing_mv(M)
    rep = verify_axioms(N, args.budget, seed=args.seed)
    w = direct_image_witness(N, args.budget)
    return {
        "violations": [
            {"axiom": v.axiom, "witness": [N.to_json(x) for x in v.witness], "detail": v.detail}
            for v in rep.violations
        ],
        "checked": rep.checked_counts,
        "sampled": rep.sampled,
        "top": N.to_json(N.top),
        "direct_image_ideal": w is None,
        "direct_image_witness": None if w is None else [N.to_json(x) for x in w],
    }


def _measure(M, path):
    obj = load_json(path)
    if isinstance(M, FiniteEMV):
        vals = values_from_json(M, obj)
        return tuple(vals[x] for x in M.elements)
    return symbolic_from_json(obj)


def cmd_jordan(M, args):
    m1, m2 = _measure(M, args.m1), _measure(M, args.m2)
    if isinstance(M, FinSubsets):
        if args.op != "join":
            raise UnsupportedCarrier("only joins of strong measures are supported on finite subsets")
        return {"op": "join", "measure": symbolic_to_json(strong_join_T(m1, m2))}
    M = _finite(M, "jordan")
    res = jordan_lattice(M, m1, m2)
    if args.op == "pos":
        return {"op": "pos", "measure": vector_to_json(M, res.pos),
                "negative_part": vector_to_json(M, res.neg)}
    out = res.join if args.op == "join" else res.meet
    return {"op": args.op, "measure": vector_to_json(M, out)}


def cmd_radical(M, args):
    rad, inf = radical_and_infinitesimals(M, args.bound)
    return {"radical": element_set(M, rad), "infinitesimals": element_set(M, inf),
            "bound": None if isinstance(M, FiniteEMV) else args.bound}


def cmd_classify(M, args):
    f = state_from_json(M, load_json(args.prestate))
    return {"class": str(classify_prestate(M, f, budget=args.budget))}


COMMANDS = {
    "verify": cmd_verify,
    "morphisms": cmd_morphisms,
    "states": cmd_states,
    "decompose": cmd_decompose,
    "extend": cmd_extend,
    "represent": cmd_represent,
    "jordan": cmd_jordan,
    "radical": cmd_radical,
    "classify": cmd_classify,
}


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="emvkit", description="Exact state computations on EMV-algebras.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("spec", help="algebra-spec JSON file")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        return sp

    add("verify", "check the EMV axioms").add_argument("--budget", type=int, default=6)
    add("morphisms", "list the state-morphisms")
    sp = add("states", "check a functional")
    sp.add_argument("--check", required=True)
    sp.add_argument("--budget", type=int, default=6)
    add("decompose", "barycentric weights of a state").add_argument("--state", required=True)
    sp = add("extend", "extend a state from a subalgebra")
    sp.add_argument("--sub", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("--morphism", action="store_true", help="extend as a state-morphism")
    add("represent", "build and sample the representing MV-algebra").add_argument(
        "--budget", type=int, default=6)
    sp = add("jordan", "lattice operations on signed measures")
    sp.add_argument("--m1", required=True)
    sp.add_argument("--m2", required=True)
    sp.add_argument("--op", choices=["join", "meet", "pos"], default="join")
    add("radical", "radical and infinitesimals").add_argument("--bound", type=int, default=None)
    sp = add("classify", "classify a pre-state")
    sp.add_argument("--prestate", required=True)
    sp.add_argument("--budget", type=int, default=6)
    return p


def _echo(args) -> dict:
    out = {"name": args.command}
    for k, v in sorted(vars(args).items()):
        if k == "command":
            continue
        if isinstance(v, str) and k in ("spec", "check", "state", "sub", "m1", "m2", "prestate"):
            v = os.path.basename(v)
        out[k] = v
    return out


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = make_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"emvkit: usage error: {exc}\n")
        return 1
    report = {"command": _echo(args), "version": __version__}
    M = None
    try:
        spec = load_json(args.spec)
        M = build(spec)
        report["algebra"] = summary(M, spec)
        report["result"] = COMMANDS[args.command](M, args)
        code = 0
    except UsageError as exc:
        sys.stderr.write(f"emvkit: usage error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"emvkit: {exc}\n")
        return 1
    except EMVError as exc:
        report["error"] = {"code": exc.code, "message": exc.message,
                           "witness": plain(exc.witness, M)}
        code = exc.exit_code
    out.write(dumps(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
