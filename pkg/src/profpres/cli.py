"""Command-line front end over .prof files.

Exit codes: 0 success / holds / valid / iso / proved; 1 certified failure;
2 inconclusive within budget; 3 usage or parse errors.  Output is
deterministic for fixed inputs and options.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import bridge, compose, dsl, semantics
from .errors import DslError, ProfpresError
from .presentations import (
    CurriedMorphism,
    CurriedPresentation,
    InstanceMorphism,
    InstancePresentation,
    UncurriedMorphism,
    UncurriedPresentation,
    ValidationStatus,
    validate_curried,
    validate_curried_morphism,
    validate_instance_structure,
    validate_morphism,
    validate_uncurried_structure,
)
from .prover import Budget, Status, engine_for, theory_of_category
from .syntax import CatMorphism, CatPresentation, validate_presentation

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


def _budget(args) -> Budget:
    return Budget(
        max_path_length=args.max_len,
        max_closure_rounds=args.rounds,
        max_kb_steps=args.kb_steps,
    )


def _read_source(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read(), path


def _entity(ws: dsl.Workspace, name: str):
    if name not in ws:
        raise ProfpresError(f"no entity named {name!r} in the workspace")
    return ws[name]


def _emit(args, text_out: str, json_obj) -> None:
    if args.format == "json":
        import json

        sys.stdout.write(json.dumps(json_obj, indent=2) + "\n")
    else:
        sys.stdout.write(text_out + ("\n" if not text_out.endswith("\n") else ""))


# --------------------------------------------------------------------------
# verb implementations
# --------------------------------------------------------------------------


def _cmd_prove(ws, args) -> int:
    ent = _entity(ws, args.theory)
    budget = _budget(args)
    lhs, rhs = dsl.parse_equation_for(ent, args.eq)
    if isinstance(ent, CatPresentation):
        theory = theory_of_category(ent)
        a, b = lhs, rhs
    elif isinstance(ent, UncurriedPresentation):
        col = ent.collage
        theory, a, b = col.theory, col.embed_cross(lhs), col.embed_cross(rhs)
    elif isinstance(ent, InstancePresentation):
        col = ent.collage
        theory, a, b = col.theory, col.embed_term(lhs), col.embed_term(rhs)
    else:
        raise ProfpresError(f"cannot prove over a {type(ent).__name__}")
    out = engine_for(theory, budget).prove(a, b)
    _emit(
        args,
        f"{lhs} = {rhs}: {out.describe()}",
        {
            "lhs": str(lhs),
            "rhs": str(rhs),
            "status": out.status.value,
            "equal": out.equal,
            "witness_depth": out.witness_depth,
        },
    )
    if out.is_positive:
        return EXIT_OK
    if out.is_certified_negative:
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


def _report_exit(status: ValidationStatus) -> int:
    return {
        ValidationStatus.VALID: EXIT_OK,
        ValidationStatus.INVALID: EXIT_FAIL,
        ValidationStatus.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[status]


def _cmd_check(ws, args) -> int:
    ent = _entity(ws, args.entity)
    budget = _budget(args)
    if args.nongenerative or args.strict or args.conservative:
        if not isinstance(ent, UncurriedPresentation):
            raise ProfpresError(f"{args.entity} is not an uncurried presentation")
        if args.conservative:
            out = bridge.check_conservative(ent, budget)
        else:
            out = bridge.check_nongenerative(ent, budget, strict=args.strict)
        _emit(
            args,
            f"{args.entity}: {out.describe()}",
            {
                "entity": args.entity,
                "status": out.status.value,
                "certified": out.certified,
                "witnesses": [str(w) for w in out.witnesses],
                "candidates": [str(c) for c in out.candidates],
            },
        )
        if out.status is bridge.CheckStatus.HOLDS:
            return EXIT_OK
        if out.status is bridge.CheckStatus.FAILS:
            return EXIT_FAIL
        return EXIT_INCONCLUSIVE

    if isinstance(ent, CatPresentation):
        diags = validate_presentation(ent)
    elif isinstance(ent, InstancePresentation):
        diags = validate_instance_structure(ent)
    elif isinstance(ent, UncurriedPresentation):
        diags = validate_uncurried_structure(ent)
    else:
        diags = None
    if diags is not None and not isinstance(ent, CurriedPresentation):
        text = f"{args.entity}: " + ("ok" if not diags else "; ".join(map(str, diags)))
        _emit(args, text, {"entity": args.entity, "diagnostics": [str(d) for d in diags]})
        return EXIT_OK if not diags else EXIT_FAIL

    if isinstance(ent, CurriedPresentation):
        rep = validate_curried(ent, budget)
    elif isinstance(ent, (CatMorphism, InstanceMorphism, UncurriedMorphism)):
        rep = validate_morphism(ent, budget)
    elif isinstance(ent, CurriedMorphism):
        rep = validate_curried_morphism(ent, budget)
    else:  # pragma: no cover
        raise ProfpresError(f"cannot check a {type(ent).__name__}")
    _emit(
        args,
        rep.describe(),
        {
            "entity": args.entity,
            "status": rep.status.value,
            "checks": [
                {"label": i.label, "outcome": i.outcome.status.value, "equal": i.outcome.equal}
                for i in rep.items
            ],
        },
    )
    return _report_exit(rep.status)


def _cmd_compose(ws, args) -> int:
    left = _entity(ws, args.left)
    right = _entity(ws, args.right)
    if not isinstance(left, CurriedPresentation) or not isinstance(right, CurriedPresentation):
        raise ProfpresError("compose expects two curried presentations")
    out = compose.compose_curried(left, right, name=args.name)
    _emit(args, dsl.render(out), dsl.entity_json(out))
    return EXIT_OK


def _cmd_uncurry(ws, args) -> int:
    ent = _entity(ws, args.entity)
    if not isinstance(ent, CurriedPresentation):
        raise ProfpresError(f"{args.entity} is not a curried presentation")
    out = bridge.uncurry(ent, name=args.name)
    _emit(args, dsl.render(out), dsl.entity_json(out))
    return EXIT_OK


def _cmd_curry(ws, args) -> int:
    ent = _entity(ws, args.entity)
    if not isinstance(ent, UncurriedPresentation):
        raise ProfpresError(f"{args.entity} is not an uncurried presentation")
    budget = _budget(args)
    P, report = bridge.curry_with_report(ent, budget, name=args.name)
    if report.status is ValidationStatus.INVALID:
        bad = report.counterexample
        sys.stderr.write(
            f"curry failed: the output is invalid ({bad.label if bad else '?'}), "
            "so the input is not conservative\n"
        )
        return EXIT_FAIL
    _emit(args, dsl.render(P), dsl.entity_json(P))
    if report.status is ValidationStatus.INCONCLUSIVE:
        sys.stderr.write("warning: output validation inconclusive within budget\n")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _table_json(table: semantics.ProfunctorTable) -> dict:
    lt, rt = table.left_table, table.right_table
    return {
        "kind": "profunctor-table",
        "label": table.label,
        "left": table.left_base.name,
        "right": table.right_base.name,
        "stabilized": table.stabilized,
        "cells": [
            {"sorts": [c.name, d.name], "classes": [str(r) for r in reps]}
            for (c, d), reps in table.cells()
        ],
        "left_action": [
            {
                "hom": str(fr),
                "sorts": [key[0].name, key[1].name],
                "maps": [
                    [str(r), str(img)]
                    for (c, d), reps in table.cells()
                    if c == key[1]
                    for r in reps
                    for img in [table.act_left(fr, r)]
                    if img is not None
                ],
            }
            for key, fr in lt.hom_reps()
        ],
        "right_action": [
            {
                "hom": str(gr),
                "sorts": [key[0].name, key[1].name],
                "maps": [
                    [str(r), str(img)]
                    for (c, d), reps in table.cells()
                    if d == key[0]
                    for r in reps
                    for img in [table.act_right(c, r, gr)]
                    if img is not None
                ],
            }
            for key, gr in rt.hom_reps()
        ],
    }


def _table_text(table: semantics.ProfunctorTable) -> str:
    lines = [
        f"table {table.label} : {table.left_base.name} -/-> {table.right_base.name} "
        f"[{'stabilized' if table.stabilized else 'bounded'}]"
    ]
    for (c, d), reps in table.cells():
        lines.append(f"({c.name}, {d.name}): " + ", ".join(str(r) for r in reps))
    for key, fr in table.left_table.hom_reps():
        if fr.is_identity:
            continue
        maps = []
        for (c, d), reps in table.cells():
            if c != key[1]:
                continue
            for r in reps:
                img = table.act_left(fr, r)
                if img is not None:
                    maps.append(f"{r} -> {img}")
        if maps:
            lines.append(f"[{fr}] . -: " + "; ".join(maps))
    for key, gr in table.right_table.hom_reps():
        if gr.is_identity:
            continue
        maps = []
        for (c, d), reps in table.cells():
            if d != key[0]:
                continue
            for r in reps:
                img = table.act_right(c, r, gr)
                if img is not None:
                    maps.append(f"{r} -> {img}")
        if maps:
            lines.append(f"- . [{gr}]: " + "; ".join(maps))
    return "\n".join(lines)


def _entity_table(ent, budget: Budget) -> semantics.ProfunctorTable:
    if isinstance(ent, (UncurriedPresentation, CurriedPresentation, InstancePresentation)):
        return semantics.profunctor_table(ent, budget)
    raise ProfpresError(f"no table for a {type(ent).__name__}")


def _cmd_semantics(ws, args) -> int:
    ent = _entity(ws, args.entity)
    budget = _budget(args)
    if isinstance(ent, CatPresentation):
        table = semantics.category_table(ent, budget)
        lines = [
            f"table {ent.name} [{'stabilized' if table.stabilized else 'bounded'}]"
        ]
        for (c, d), reps in sorted(table.homs.items(), key=lambda kv: (kv[0][0].name, kv[0][1].name)):
            lines.append(f"({c.name}, {d.name}): " + ", ".join(str(r) for r in reps))
        _emit(
            args,
            "\n".join(lines),
            {
                "kind": "category-table",
                "name": ent.name,
                "stabilized": table.stabilized,
                "homs": [
                    {"sorts": [c.name, d.name], "classes": [str(r) for r in reps]}
                    for (c, d), reps in sorted(
                        table.homs.items(), key=lambda kv: (kv[0][0].name, kv[0][1].name)
                    )
                ],
            },
        )
        return EXIT_OK
    table = _entity_table(ent, budget)
    _emit(args, _table_text(table), _table_json(table))
    return EXIT_OK


def _cmd_coend(ws, args) -> int:
    left = _entity(ws, args.left)
    right = _entity(ws, args.right)
    budget = _budget(args)
    table = semantics.coend_compose(_entity_table(left, budget), _entity_table(right, budget))
    _emit(args, _table_text(table), _table_json(table))
    return EXIT_OK


def _iso_exit(report: semantics.IsoReport) -> int:
    if report.status is semantics.IsoStatus.ISO:
        return EXIT_OK
    if report.status is semantics.IsoStatus.NOT_ISO:
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


def _cmd_iso_check(ws, args) -> int:
    left = _entity(ws, args.left)
    right = _entity(ws, args.right)
    budget = _budget(args)
    if args.tables:
        report = semantics.find_table_iso(
            _entity_table(left, budget), _entity_table(right, budget)
        )
        label = f"tables of {args.left} and {args.right}"
    else:
        if not isinstance(left, CurriedPresentation) or not isinstance(
            right, CurriedPresentation
        ):
            raise ProfpresError("iso-check expects two composable curried presentations")
        report = semantics.check_mu_iso(left, right, budget)
        label = f"coend vs composite for ({args.left}, {args.right})"
    _emit(
        args,
        f"{label}: {report.describe()}",
        {
            "left": args.left,
            "right": args.right,
            "status": report.status.value,
            "witness": report.witness,
            "checked_squares": report.checked_squares,
        },
    )
    return _iso_exit(report)


def _cmd_laws(ws, args) -> int:
    budget = _budget(args)
    names = (
        [n.strip() for n in args.entities.split(",") if n.strip()]
        if args.entities
        else [n for n, e in ws.entities.items() if isinstance(e, CurriedPresentation)]
    )
    curried = []
    for n in names:
        ent = _entity(ws, n)
        if not isinstance(ent, CurriedPresentation):
            raise ProfpresError(f"{n} is not a curried presentation")
        curried.append((n, ent))
    results: list[tuple[str, str]] = []

    def record(label: str, ok: bool, detail: str = ""):
        results.append((label, ("pass" if ok else "FAIL") + (f" ({detail})" if detail else "")))

    from .prover import morphisms_equal

    for n, P in curried:
        for kind, pair in (("lambda", compose.left_unitor(P)), ("rho", compose.right_unitor(P))):
            cell, inv = pair
            ok1 = validate_curried_morphism(cell, budget).status is ValidationStatus.VALID
            ok2 = validate_curried_morphism(inv, budget).status is ValidationStatus.VALID
            rt = morphisms_equal(
                cell.then(inv), CurriedMorphism.identity(cell.source), budget
            ).is_positive and morphisms_equal(
                inv.then(cell), CurriedMorphism.identity(P), budget
            ).is_positive
            record(f"{kind}[{n}] valid+invertible", ok1 and ok2 and rt)
    for n1, P in curried:
        for n2, Q in curried:
            if P.right != Q.left:
                continue
            mid = compose.unit_presentation(P.right)
            al, al_inv = compose.associator(P, mid, Q)
            ok = (
                validate_curried_morphism(al, budget).status is ValidationStatus.VALID
                and validate_curried_morphism(al_inv, budget).status is ValidationStatus.VALID
            )
            record(f"alpha[{n1},U,{n2}] valid", ok)
            # triangle: (1 * lambda) o alpha = rho * 1
            lam, _ = compose.left_unitor(Q)
            rho, _ = compose.right_unitor(P)
            lhs = al.then(compose.compose_curried_morphisms(CurriedMorphism.identity(P), lam))
            rhs = compose.compose_curried_morphisms(rho, CurriedMorphism.identity(Q))
            record(
                f"triangle[{n1},{n2}]",
                morphisms_equal(lhs, rhs, budget).is_positive,
            )
    bases = []
    for n, P in curried:
        for c in (P.left, P.right):
            if c not in bases:
                bases.append(c)
    for c in bases:
        rep = semantics.check_unit_iso(c, budget)
        record(f"unit-table[{c.name}]", rep.is_iso, rep.witness)
    text = "\n".join(f"{label}: {res}" for label, res in results)
    _emit(args, text, {"results": [{"law": l, "result": r} for l, r in results]})
    return EXIT_OK if all(r.startswith("pass") for _, r in results) else EXIT_FAIL


def _growth_counts(ws, args) -> tuple[list[int], str]:
    budgets = [Budget(max_path_length=k, max_closure_rounds=args.rounds, max_kb_steps=args.kb_steps) for k in range(1, args.depths + 1)]
    if args.left and args.right:
        left = _entity(ws, args.left)
        right = _entity(ws, args.right)
        counts = []
        for b in budgets:
            table = semantics.coend_compose(_entity_table(left, b), _entity_table(right, b))
            counts.append(table.class_count())
        return counts, f"{args.left}(.){args.right}"
    if args.entity:
        ent = _entity(ws, args.entity)
        counts = []
        for b in budgets:
            counts.append(_entity_table(ent, b).class_count())
        return counts, args.entity
    raise ProfpresError("growth needs --entity or both --left and --right")


def _cmd_growth(ws, args) -> int:
    counts, label = _growth_counts(ws, args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["depth", "classes"])
    for k, n in enumerate(counts, start=1):
        writer.writerow([k, n])
    sys.stdout.write(buf.getvalue())
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(4.8, 3.2))
        ax.plot(range(1, len(counts) + 1), counts, marker="o")
        ax.set_xlabel("depth (path length budget)")
        ax.set_ylabel("classes")
        ax.set_title(f"class growth of {label}")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        plt.close(fig)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profpres",
        description="presentations of categories, instances and profunctors",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("file", help=".prof source file, or - for stdin")
        p.add_argument("--max-len", type=int, default=8, help="path length budget")
        p.add_argument("--rounds", type=int, default=16, help="closure round budget")
        p.add_argument("--kb-steps", type=int, default=500, help="completion step budget")
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("prove", help="decide a path/term/cross-path equation")
    common(p)
    p.add_argument("--theory", required=True, help="entity to prove over")
    p.add_argument("--eq", required=True, help='equation, e.g. "f.g = g.f"')

    p = sub.add_parser("check", help="validate an entity or run curryability checks")
    common(p)
    p.add_argument("--entity", required=True)
    p.add_argument("--nongenerative", action="store_true")
    p.add_argument("--strict", action="store_true", help="syntactic strict nongenerativity")
    p.add_argument("--conservative", action="store_true")

    p = sub.add_parser("compose", help="compose two curried presentations")
    common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--name", default=None)

    p = sub.add_parser("uncurry", help="uncurry a curried presentation")
    common(p)
    p.add_argument("--entity", required=True)
    p.add_argument("--name", default=None)

    p = sub.add_parser("curry", help="curry a nongenerative uncurried presentation")
    common(p)
    p.add_argument("--entity", required=True)
    p.add_argument("--name", default=None)

    p = sub.add_parser("semantics", help="bounded model table of an entity")
    common(p)
    p.add_argument("--entity", required=True)

    p = sub.add_parser("coend", help="coend-compose the tables of two entities")
    common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = sub.add_parser("iso-check", help="check the pairing map for a composable pair")
    common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument(
        "--tables",
        action="store_true",
        help="instead, search for an equivariant bijection between the two tables",
    )

    p = sub.add_parser("laws", help="coherence-law suite over curried presentations")
    common(p)
    p.add_argument("--entities", default=None, help="comma-separated curried names")

    p = sub.add_parser("growth", help="class counts per depth, as CSV (and a figure)")
    common(p)
    p.add_argument("--entity", default=None)
    p.add_argument("--left", default=None)
    p.add_argument("--right", default=None)
    p.add_argument("--depths", type=int, default=6)
    p.add_argument("--csv", default=None, help="also write the CSV here")
    p.add_argument("--plot", default=None, help="render the growth curve to this file")

    return parser


_DISPATCH = {
    "prove": _cmd_prove,
    "check": _cmd_check,
    "compose": _cmd_compose,
    "uncurry": _cmd_uncurry,
    "curry": _cmd_curry,
    "semantics": _cmd_semantics,
    "coend": _cmd_coend,
    "iso-check": _cmd_iso_check,
    "laws": _cmd_laws,
    "growth": _cmd_growth,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        text, filename = _read_source(args.file)
    except OSError as exc:
        sys.stderr.write(f"cannot read {args.file}: {exc}\n")
        return EXIT_USAGE
    try:
        ws = dsl.parse_workspace(text, filename)
    except DslError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    try:
        return _DISPATCH[args.verb](ws, args)
    except bridge.NongenerativityUnverified as exc:
        sys.stderr.write(f"nongenerativity unverified: {exc}\n")
        return EXIT_INCONCLUSIVE
    except DslError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except ProfpresError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
