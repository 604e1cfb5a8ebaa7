"""Command-line surface: build artifacts, run testers, verify bounds.

Every command prints one JSON document to stdout (and to --out when given)
with the replay manifest embedded; rerunning the same command line
reproduces the document byte for byte.  Exit codes: 0 all verdicts pass,
1 a violation was found, 2 usage or capacity error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .acceptance import run_criteria
from .algebra import DEFAULT_BUDGET, Field, VecSpace
from .codes import Alphabet, distance, rate, vector_alphabet
from .concat import CompatFailure, check_f_compatible, concat_tester, concatenate
from .constructions import (
    critical_family,
    code_from_family,
    dependence_tester,
    generalized_hadamard,
    generalized_long_code,
    ring_constraint_tester,
)
from .errors import CapacityError, DomainError, ForgeError, MismatchError, SchemaError
from .pipeline import general_reduction, linear_reduction, semilinear_reduction
from .separability import (
    SeparabilityFailure,
    check_linearly_separable,
    check_separable,
    linear_separable_replacement,
    separable_replacement,
)
from .serialize import (
    SCHEMAS,
    certificate_to_json,
    code_from_json,
    code_to_json,
    dumps,
    encoder_from_json,
    encoder_to_json,
    family_from_json,
    family_to_json,
    frac_to_json,
    rate_to_json,
    report_to_json,
    soundness_to_json,
    tester_from_json,
    tester_to_json,
    value_to_json,
    witness_to_json,
)
from .testers import equality_tester, soundness_exact, soundness_sampled, validate
from .codes import repetition_code


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--seed", type=int, default=0, help="64-bit unsigned root seed")
    common.add_argument("--out", type=str, default=None)

    parser = argparse.ArgumentParser(
        prog="ltcforge", description="locally-testable-code workbench"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build").add_subparsers(dest="what", required=True)
    b_had = build.add_parser("hadamard", parents=[common])
    b_had.add_argument("--p", type=int, required=True)
    b_had.add_argument("--dimv", type=int, required=True)
    b_had.add_argument("--dimd", type=int, required=True)
    b_long = build.add_parser("longcode", parents=[common])
    b_long.add_argument("--s", type=int, required=True)
    b_long.add_argument("--delta-size", type=int, required=True)
    b_crit = build.add_parser("critical", parents=[common])
    b_crit.add_argument("--s", type=int, required=True)
    b_enc = build.add_parser("encoder", parents=[common])
    b_enc.add_argument("--sigma-size", type=int)
    b_enc.add_argument("--delta-size", type=int)
    b_enc.add_argument("--linear", action="store_true")
    b_enc.add_argument("--p", type=int)
    b_enc.add_argument("--sigma-dim", type=int)
    b_enc.add_argument("--delta-dim", type=int)

    tester = sub.add_parser("tester").add_subparsers(dest="what", required=True)
    t_dep = tester.add_parser("dependence", parents=[common])
    t_dep.add_argument("--family", type=str, help="family JSON path")
    t_dep.add_argument("--hadamard", nargs=3, type=int, metavar=("P", "DIMV", "DIMD"))
    t_dep.add_argument("--longcode", nargs=2, type=int, metavar=("S", "DELTA"))
    t_dep.add_argument("--q", type=int, default=2)
    t_ring = tester.add_parser("ring", parents=[common])
    t_ring.add_argument("--s", type=int, required=True)
    t_eq = tester.add_parser("equality", parents=[common])
    t_eq.add_argument("--n", type=int, required=True)
    t_eq.add_argument("--size", type=int)
    t_eq.add_argument("--p", type=int)
    t_eq.add_argument("--dim", type=int)

    sound = sub.add_parser("soundness").add_subparsers(dest="what", required=True)
    s_ex = sound.add_parser("exact", parents=[common])
    s_ex.add_argument("--tester", type=str, required=True)
    s_ex.add_argument("--code", type=str, required=True)
    s_ex.add_argument("--bound", type=_fraction, default=None)
    s_sa = sound.add_parser("sample", parents=[common])
    s_sa.add_argument("--tester", type=str, required=True)
    s_sa.add_argument("--code", type=str, required=True)
    s_sa.add_argument("--trials", type=int, required=True)
    s_sa.add_argument("--bound", type=_fraction, default=None)

    conc = sub.add_parser("concat", parents=[common])
    conc.add_argument("--code", type=str, required=True)
    conc.add_argument("--encoder", type=str, required=True)
    conc.add_argument("--outer-tester", type=str)
    conc.add_argument("--mu", type=_fraction)
    conc.add_argument("--inner-tester", type=str)
    conc.add_argument("--nu", type=_fraction)

    sep = sub.add_parser("separate").add_subparsers(dest="what", required=True)
    sp_ck = sep.add_parser("check", parents=[common])
    sp_ck.add_argument("--tester", type=str, required=True)
    sp_ck.add_argument("--delta-size", type=int)
    sp_ck.add_argument("--linear", action="store_true")
    sp_ck.add_argument("--p", type=int)
    sp_ck.add_argument("--delta-dim", type=int)
    sp_rp = sep.add_parser("replace", parents=[common])
    sp_rp.add_argument("--tester", type=str, required=True)
    sp_rp.add_argument("--mu", type=_fraction, required=True)
    sp_rp.add_argument("--delta-size", type=int)
    sp_rp.add_argument("--linear", action="store_true")
    sp_rp.add_argument("--p", type=int)
    sp_rp.add_argument("--delta-dim", type=int)

    pipe = sub.add_parser("pipeline").add_subparsers(dest="what", required=True)
    for kind in ("linear", "general", "semilinear"):
        pp = pipe.add_parser(kind, parents=[common])
        pp.add_argument("--demo", action="store_true")
        pp.add_argument("--code", type=str)
        pp.add_argument("--tester", type=str)
        pp.add_argument("--mu", type=_fraction)
        pp.add_argument("--trials", type=int, default=10**5)
        if kind == "linear":
            pp.add_argument("--dimd", type=int)
            pp.add_argument("--c", type=int)
        if kind == "general":
            pp.add_argument("--d", type=int)
            pp.add_argument("--c", type=int)

    ver = sub.add_parser("verify").add_subparsers(dest="what", required=True)
    v_all = ver.add_parser("all", parents=[common])
    v_all.add_argument("--only", type=str, default=None, help="comma-separated ids")

    return parser


def _cmd_build(args) -> tuple[dict, int]:
    if args.what == "hadamard":
        fam, code = generalized_hadamard(
            VecSpace(Field(args.p), args.dimv), VecSpace(Field(args.p), args.dimd), args.budget
        )
        return {
            "code": code_to_json(code),
            "family": family_to_json(fam),
            "distance": frac_to_json(distance(code)),
            "rate": rate_to_json(rate(code)),
        }, 0
    if args.what == "longcode":
        fam, code = generalized_long_code(args.s, Alphabet.plain(args.delta_size), args.budget)
        return {
            "code": code_to_json(code),
            "family": family_to_json(fam),
            "distance": frac_to_json(distance(code)),
            "rate": rate_to_json(rate(code)),
        }, 0
    if args.what == "critical":
        g, _ = generalized_long_code(args.s, Alphabet.plain(2), args.budget)
        fam = critical_family(g)
        code, injective = code_from_family(fam)
        return {
            "family": family_to_json(fam),
            "code": code_to_json(code),
            "injective": injective,
        }, 0
    if args.what == "encoder":
        from .separability import compatibility_encoder

        if args.linear:
            if args.p is None or args.sigma_dim is None or args.delta_dim is None:
                raise DomainError("linear encoder needs --p --sigma-dim --delta-dim")
            enc = compatibility_encoder(
                vector_alphabet(args.p, args.sigma_dim),
                vector_alphabet(args.p, args.delta_dim),
                True,
                args.budget,
            )
        else:
            if args.sigma_size is None or args.delta_size is None:
                raise DomainError("encoder needs --sigma-size --delta-size")
            enc = compatibility_encoder(
                Alphabet.plain(args.sigma_size), Alphabet.plain(args.delta_size), False, args.budget
            )
        return {"encoder": encoder_to_json(enc)}, 0
    raise DomainError(f"unknown build target {args.what}")


def _cmd_tester(args) -> tuple[dict, int]:
    if args.what == "dependence":
        sources = [args.family is not None, args.hadamard is not None, args.longcode is not None]
        if sum(sources) != 1:
            raise DomainError("give exactly one of --family/--hadamard/--longcode")
        if args.family:
            fam = family_from_json(_load(args.family))
        elif args.hadamard:
            p, dimv, dimd = args.hadamard
            fam, _ = generalized_hadamard(
                VecSpace(Field(p), dimv), VecSpace(Field(p), dimd), args.budget
            )
        else:
            s, d = args.longcode
            fam, _ = generalized_long_code(s, Alphabet.plain(d), args.budget)
        tester = dependence_tester(fam, args.q, args.budget)
        return {
            "tester": tester_to_json(tester),
            "degenerate": bool(tester.meta.get("degenerate", False)),
        }, 0
    if args.what == "ring":
        tester = ring_constraint_tester(args.s)
        return {
            "tester": tester_to_json(tester),
            "all_ones_index": tester.meta["all_ones_index"],
        }, 0
    if args.what == "equality":
        if args.size is not None:
            alphabet = Alphabet.plain(args.size)
        elif args.p is not None and args.dim is not None:
            alphabet = vector_alphabet(args.p, args.dim)
        else:
            raise DomainError("equality tester needs --size or --p/--dim")
        return {"tester": tester_to_json(equality_tester(alphabet, args.n))}, 0
    raise DomainError(f"unknown tester {args.what}")


def _cmd_soundness(args) -> tuple[dict, int]:
    tester = tester_from_json(_load(args.tester))
    code = code_from_json(_load(args.code))
    if args.what == "exact":
        report = soundness_exact(tester, code, args.budget, bound=args.bound)
    else:
        report = soundness_sampled(tester, code, args.trials, args.seed, bound=args.bound)
    code_ok = report.verdict not in ("fail", "violated")
    return {"soundness": soundness_to_json(report)}, 0 if code_ok else 1


def _cmd_concat(args) -> tuple[dict, int]:
    code = code_from_json(_load(args.code))
    encoder = encoder_from_json(_load(args.encoder))
    joined = concatenate(code, encoder)
    payload: dict = {"code": code_to_json(joined)}
    if args.outer_tester:
        if args.mu is None or args.inner_tester is None or args.nu is None:
            raise DomainError("tester composition needs --mu, --inner-tester and --nu")
        outer = tester_from_json(_load(args.outer_tester))
        inner = tester_from_json(_load(args.inner_tester))
        wit = check_f_compatible(outer, encoder, args.budget)
        if isinstance(wit, CompatFailure):
            payload["incompatible"] = {"check": wit.check_index, "coordinate": wit.coordinate}
            return payload, 1
        composed = concat_tester(outer, args.mu, inner, args.nu, encoder, wit)
        payload["tester"] = tester_to_json(composed)
        payload["witness"] = witness_to_json(wit, encoder.target.size)
        payload["bound"] = frac_to_json(composed.meta["bound"])
        payload["validation_ok"] = validate(composed, joined).ok
        return payload, 0 if payload["validation_ok"] else 1
    return payload, 0


def _cmd_separate(args) -> tuple[dict, int]:
    tester = tester_from_json(_load(args.tester))
    if args.what == "check":
        if args.linear:
            if args.p is None or args.delta_dim is None:
                raise DomainError("linear check needs --p --delta-dim")
            outcome = check_linearly_separable(tester, VecSpace(Field(args.p), args.delta_dim))
        else:
            if args.delta_size is None:
                raise DomainError("check needs --delta-size")
            outcome = check_separable(tester, args.delta_size)
        if isinstance(outcome, SeparabilityFailure):
            return {
                "separable": False,
                "failure": {
                    "check": outcome.check_index,
                    "coordinate": outcome.coordinate,
                    "required": outcome.required,
                },
            }, 1
        return {"separable": True, "certificate": certificate_to_json(outcome)}, 0
    if args.what == "replace":
        if args.linear:
            if args.p is None or args.delta_dim is None:
                raise DomainError("linear replace needs --p --delta-dim")
            replaced = linear_separable_replacement(
                tester, args.mu, VecSpace(Field(args.p), args.delta_dim)
            )
        else:
            if args.delta_size is None:
                raise DomainError("replace needs --delta-size")
            replaced = separable_replacement(tester, args.mu, args.delta_size)
        return {
            "tester": tester_to_json(replaced),
            "bound": frac_to_json(replaced.meta["bound"]),
        }, 0
    raise DomainError(f"unknown separate action {args.what}")


def _demo_inputs(kind: str, budget: int):
    if kind == "general":
        code = repetition_code(Alphabet.plain(2), 2)
    else:
        code = repetition_code(vector_alphabet(2, 1), 2)
    tester = equality_tester(code.alphabet, 2)
    mu = soundness_exact(tester, code, budget).value
    return code, tester, mu


def _cmd_pipeline(args) -> tuple[dict, int]:
    kind = args.what
    if args.demo:
        code, tester, mu = _demo_inputs(kind, args.budget)
        if kind == "linear":
            c = args.c if args.c is not None else 2
            dimd = args.dimd if args.dimd is not None else 2
        if kind == "general":
            c = args.c if args.c is not None else 3
            d = args.d if args.d is not None else 3
    else:
        if args.code is None or args.tester is None or args.mu is None:
            raise DomainError("pipeline needs --demo or --code/--tester/--mu")
        code = code_from_json(_load(args.code))
        tester = tester_from_json(_load(args.tester))
        mu = args.mu
        if kind == "linear":
            if args.dimd is None or args.c is None:
                raise DomainError("linear pipeline needs --dimd and --c")
            c, dimd = args.c, args.dimd
        if kind == "general":
            if args.d is None or args.c is None:
                raise DomainError("general pipeline needs --d and --c")
            c, d = args.c, args.d
    if kind == "linear":
        p = code.alphabet.space.field.p
        report = linear_reduction(
            code, tester, mu, VecSpace(Field(p), dimd), c,
            budget=args.budget, seed=args.seed, trials=args.trials,
        )
    elif kind == "general":
        report = general_reduction(
            code, tester, mu, d, c, budget=args.budget, seed=args.seed, trials=args.trials
        )
    else:
        report = semilinear_reduction(
            code, tester, mu, budget=args.budget, seed=args.seed, trials=args.trials
        )
    return {"report": report_to_json(report)}, 0 if report.overall != "fail" else 1


def _cmd_verify(args) -> tuple[dict, int]:
    only = None
    if args.only:
        only = [int(x) for x in args.only.split(",") if x.strip()]
    outcome = run_criteria(only=only, budget=args.budget, seed=args.seed)
    doc = {
        "schema": SCHEMAS["verify"],
        "criteria": value_to_json(outcome["criteria"]),
        "overall": outcome["overall"],
    }
    return doc, 0 if outcome["overall"] == "pass" else 1


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    manifest = {
        "command": argv,
        "seed": args.seed,
        "budget": args.budget,
        "version": __version__,
    }
    try:
        handler = {
            "build": _cmd_build,
            "tester": _cmd_tester,
            "soundness": _cmd_soundness,
            "concat": _cmd_concat,
            "separate": _cmd_separate,
            "pipeline": _cmd_pipeline,
            "verify": _cmd_verify,
        }[args.command]
        payload, exit_code = handler(args)
    except (CapacityError, DomainError, SchemaError, MismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, FileNotFoundError, KeyError) as exc:
        print(f"error: bad input ({exc})", file=sys.stderr)
        return 2
    except ForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = {"manifest": manifest, **payload}
    text = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
