"""Command-line interface.

Subcommands: build, characters, multipliers, bse-norm, check-bse, verify.
All numbers in emitted JSON are [re, im] pairs with 17-significant-digit
rendering; reports are byte-identical across runs with equal seeds.
Exit codes: 0 all checks pass, 1 a check failed, 2 input/parse error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .bse import bse_norm_dual, bse_norm_primal, check_bse_property
from .constructions import (
    SemidirectSpec,
    finite_abelian_group_algebra,
    lau_product,
    semidirect,
)
from .errors import BanalgError, SchemaError
from .fixtures import FAMILIES
from .jsonio import (
    algebra_from_dict,
    bundle_from_dict,
    bundle_to_dict,
    complex_pair,
    load_json,
    morphism_from_dict,
    render_json,
    sigma_from_dict,
    write_json,
)
from .multipliers import (
    decompose_left_multiplier,
    left_multiplier_space,
    multiplier_space,
)
from .spectra import characters_lau, characters_numerical, characters_semidirect
from .verify import THEOREMS, RunConfig, run_verify, theorem_records


def _load_algebra_or_bundle(path: str):
    doc = load_json(path)
    if isinstance(doc, dict) and "descriptor" in doc:
        desc = bundle_from_dict(doc, where=path)
        return desc.algebra, desc
    return algebra_from_dict(doc, where=path), None


def _emit(doc, out: str | None):
    text = render_json(doc) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_build(args) -> int:
    if args.what == "group":
        orders = [int(o) for o in args.orders.split(",") if o.strip()]
        alg = finite_abelian_group_algebra(orders)
        from .jsonio import algebra_to_dict

        _emit(algebra_to_dict(alg), args.output)
        return 0
    if args.what == "semidirect":
        B = algebra_from_dict(load_json(args.b), where=args.b)
        I = algebra_from_dict(load_json(args.i), where=args.i)
        actions = load_json(args.actions)
        from .jsonio import _tensor_from_sparse

        bi = _tensor_from_sparse(actions.get("action_bi", []),
                                 (B.dim, I.dim, I.dim), f"{args.actions}.action_bi")
        ib = _tensor_from_sparse(actions.get("action_ib", []),
                                 (I.dim, B.dim, I.dim), f"{args.actions}.action_ib")
        desc = semidirect(SemidirectSpec(B, I, bi, ib), tol=args.tol)
        _emit(bundle_to_dict(desc), args.output)
        return 0
    # lau
    A = algebra_from_dict(load_json(args.a), where=args.a)
    B = algebra_from_dict(load_json(args.b), where=args.b)
    phi = morphism_from_dict(load_json(args.phi), B, A, where=args.phi)
    desc = lau_product(A, B, phi, tol=args.tol, force=args.force)
    _emit(bundle_to_dict(desc), args.output)
    return 0


def _cmd_characters(args) -> int:
    algebra, desc = _load_algebra_or_bundle(args.algebra)
    if args.closed_form and desc is not None:
        if desc.kind == "semidirect":
            S = characters_semidirect(desc, args.tol, seed=args.seed).set
        else:
            S = characters_lau(desc, args.tol, seed=args.seed).set
    else:
        S = characters_numerical(algebra, args.tol, args.seed)
    doc = {
        "algebra": algebra.name,
        "count": len(S),
        "characters": [
            {
                "values": [complex_pair(z) for z in ch.values],
                "residual": float(ch.residual),
            }
            for ch in S
        ],
    }
    _emit(doc, args.output)
    return 0


def _cmd_multipliers(args) -> int:
    algebra, desc = _load_algebra_or_bundle(args.algebra)
    space = left_multiplier_space(algebra) if args.left else multiplier_space(algebra)
    doc = {
        "algebra": algebra.name,
        "kind": space.kind,
        "dim": space.dim,
        "basis": [[[complex_pair(z) for z in row] for row in T.matrix]
                  for T in space.basis],
    }
    if args.blocks:
        bundle = bundle_from_dict(load_json(args.blocks), where=args.blocks)
        blocks = []
        for T in space.basis:
            dec = decompose_left_multiplier(T, bundle, args.tol)
            blocks.append({
                "relation_residuals": {k: float(v) for k, v in
                                       dec.relation_residuals.items()},
                "membership_residuals": {k: float(v) for k, v in
                                         dec.membership_residuals.items()},
            })
        doc["blocks"] = blocks
    _emit(doc, args.output)
    return 0


def _cmd_bse_norm(args) -> int:
    algebra, desc = _load_algebra_or_bundle(args.algebra)
    S = characters_numerical(algebra, args.tol, args.seed)
    sigma = sigma_from_dict(load_json(args.sigma), expected_len=len(S),
                            where=args.sigma)
    fn = bse_norm_primal(sigma, S, algebra, args.opt_tol * 1e-2)
    doc = {
        "algebra": algebra.name,
        "bse_norm": fn.bse_norm,
        "minimizer": [complex_pair(z) for z in fn.minimizer.coeffs],
        "certificate": [complex_pair(z) for z in fn.dual_certificate],
        "gap": fn.gap,
        "method": fn.method,
    }
    if args.dual:
        dual_value, cert = bse_norm_dual(sigma, S, algebra, args.opt_tol * 1e-2)
        doc["dual_norm"] = dual_value
        doc["dual_certificate"] = [complex_pair(z) for z in cert]
    _emit(doc, args.output)
    return 0


def _cmd_check_bse(args) -> int:
    algebra, _ = _load_algebra_or_bundle(args.algebra)
    v = check_bse_property(algebra, args.tol, seed=args.seed)
    doc = {
        "algebra": algebra.name,
        "is_bse": v.is_bse,
        "semisimple": v.semisimple,
        "gelfand_space_dim": v.gelfand_space_dim,
        "multiplier_hat_dim": v.multiplier_hat_dim,
        "containments": [v.containment_m_in_c, v.containment_c_in_m],
    }
    _emit(doc, args.output)
    return 0 if v.is_bse else 1


def _cmd_verify(args) -> int:
    cfg = RunConfig(
        tol_algebraic=args.tol,
        tol_opt=args.opt_tol,
        seed=args.seed,
        families=tuple(args.families.split(",")) if args.families else FAMILIES,
        count=args.count,
        max_dim=args.max_dim,
        jobs=args.jobs,
    )
    if args.bundle:
        desc = bundle_from_dict(load_json(args.bundle), where=args.bundle)
        theorems = [args.theorem] if args.theorem else list(THEOREMS)
        records = []
        for th in theorems:
            records.extend(theorem_records(desc, th, cfg))
        from .verify import Report

        report = Report(config=cfg, records=sorted(records, key=lambda r: r.name))
    else:
        report = run_verify(cfg)
    if args.format == "json":
        sys.stdout.write(report.to_json())
    else:
        color = os.environ.get("BANALG_NO_COLOR", "") == "" and sys.stdout.isatty()
        sys.stdout.write(report.to_text(color=color))
    return 0 if report.ok else 1


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="algebraic residual tolerance (default 1e-9)")
    common.add_argument("--opt-tol", type=float, default=argparse.SUPPRESS,
                        help="optimization tolerance (default 1e-6)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="random seed")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker processes for verify")
    common.add_argument("--format", choices=("json", "text"),
                        default=argparse.SUPPRESS,
                        help="report rendering for verify")

    parser = argparse.ArgumentParser(
        prog="banalg",
        description="workbench for finite-dimensional commutative Banach algebras",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"banalg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="assemble product algebras and fixtures",
                       parents=[common])
    bsub = b.add_subparsers(dest="what", required=True)
    b_sd = bsub.add_parser("semidirect", parents=[common],
                           help="subalgebra (+) ideal from action tensors")
    b_sd.add_argument("--b", required=True, help="subalgebra JSON")
    b_sd.add_argument("--i", required=True, help="ideal JSON")
    b_sd.add_argument("--actions", required=True, help="action tensors JSON")
    b_sd.add_argument("-o", "--output", default=None)
    b_lau = bsub.add_parser("lau", parents=[common],
                            help="A x_phi B for a contractive homomorphism phi")
    b_lau.add_argument("--a", required=True)
    b_lau.add_argument("--b", required=True)
    b_lau.add_argument("--phi", required=True, help="morphism JSON (B -> A)")
    b_lau.add_argument("--force", action="store_true",
                       help="admit a non-contractive phi")
    b_lau.add_argument("-o", "--output", default=None)
    b_gr = bsub.add_parser("group", parents=[common],
                           help="convolution algebra of a finite abelian group")
    b_gr.add_argument("--orders", required=True, help="comma list, e.g. 2,2")
    b_gr.add_argument("-o", "--output", default=None)

    c = sub.add_parser("characters", help="character space of an algebra",
                       parents=[common])
    c.add_argument("algebra", help="algebra or build-bundle JSON")
    c.add_argument("--closed-form", action="store_true",
                   help="use the product decomposition when a bundle is given")
    c.add_argument("-o", "--output", default=None)

    m = sub.add_parser("multipliers", help="multiplier space basis", parents=[common])
    m.add_argument("algebra")
    m.add_argument("--left", action="store_true", help="left multipliers T(xy)=xT(y)")
    m.add_argument("--blocks", default=None,
                   help="also decompose against this product bundle")
    m.add_argument("-o", "--output", default=None)

    n = sub.add_parser("bse-norm", parents=[common],
                       help="BSE norm of a function on the characters")
    n.add_argument("algebra")
    n.add_argument("--sigma", required=True, help='{"values": [[re,im],...]}')
    n.add_argument("--dual", action="store_true",
                   help="also evaluate the dual program")
    n.add_argument("-o", "--output", default=None)

    k = sub.add_parser("check-bse", parents=[common],
                       help="compare interpolable functions with multiplier hats")
    k.add_argument("algebra")
    k.add_argument("-o", "--output", default=None)

    v = sub.add_parser("verify", help="run the theorem-check harness",
                       parents=[common])
    v.add_argument("bundle", nargs="?", default=None,
                   help="optional build bundle to verify")
    v.add_argument("--theorem", choices=THEOREMS, default=None,
                   help="single named check for a bundle")
    v.add_argument("--families", default=None,
                   help=f"comma list from {','.join(FAMILIES)}")
    v.add_argument("--count", type=int, default=2, help="fixtures per family")
    v.add_argument("--max-dim", type=int, default=5)
    return parser


_GLOBAL_DEFAULTS = {"tol": 1e-9, "opt_tol": 1e-6, "seed": 0, "jobs": 1,
                    "format": "text"}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    # globals may be left unset (SUPPRESS) when given neither before nor
    # after the subcommand
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    handlers = {
        "build": _cmd_build,
        "characters": _cmd_characters,
        "multipliers": _cmd_multipliers,
        "bse-norm": _cmd_bse_norm,
        "check-bse": _cmd_check_bse,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except SchemaError as exc:
        for violation in exc.violations:
            print(f"error: {violation}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BanalgError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
