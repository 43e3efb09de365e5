"""Command-line interface.

Subcommand groups mirror the library layout: ``chern`` for lattice
arithmetic, ``charge`` for central charges, ``module`` for quiver modules
(JSON in/out), ``walls`` for the weight-plane pictures, ``hilbert`` for
the configuration report, and ``selftest`` to run the acceptance battery.

Exit codes: 0 success, 2 invalid input, 3 verification failure, 4 when
``--exact`` demands a certificate the search cannot provide.
"""
from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import IncompleteOracleError, InputError, VerificationError
from . import io_utils
from .io_utils import (
    dump_json,
    format_fraction,
    format_vector,
    json_meta,
    load_json,
    parse_fraction,
    parse_triple,
)
from . import ktheory
from .ktheory import ChernCharacter, HeartBasis, as_triple
from . import charge as charge_mod
from . import quiver
from . import geometry
from . import walls as walls_mod
from . import acceptance


def _heart(label: str) -> HeartBasis:
    return HeartBasis.parse(label)


def _chern_arg(s: str) -> ChernCharacter:
    t = parse_triple(s)
    return ChernCharacter(t[0], t[1], t[2])


def _emit(args, payload) -> None:
    text = dump_json(getattr(args, "out", None), payload)
    if getattr(args, "out", None) is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out}")


# ---------------------------------------------------------------------------
# chern


def cmd_chern_euler(args) -> int:
    print(format_fraction(ktheory.euler_chi(parse_triple(args.a), parse_triple(args.b))))
    return 0


def cmd_chern_mukai(args) -> int:
    print(format_fraction(ktheory.mukai_pair(parse_triple(args.a), parse_triple(args.b))))
    return 0


def cmd_chern_twist(args) -> int:
    print(format_vector(ktheory.twist(_chern_arg(args.ch), args.k).triple()))
    return 0


def cmd_chern_dimvec(args) -> int:
    print(format_vector(ktheory.dimvec(_chern_arg(args.ch), _heart(args.heart))))
    return 0


def cmd_chern_bogomolov(args) -> int:
    print(format_fraction(ktheory.bogomolov(_chern_arg(args.ch))))
    return 0


def cmd_chern_expected_dim(args) -> int:
    print(format_fraction(ktheory.expected_dim(_chern_arg(args.ch))))
    return 0


# ---------------------------------------------------------------------------
# charge


def cmd_charge_eval(args) -> int:
    a = parse_triple(args.ch)
    b = parse_fraction(args.b)
    t2 = parse_fraction(args.t2) if args.t2 else b * (1 - b)
    if args.form == "cha":
        re, im = charge_mod.z_cha_form(a, b, t2)
    else:
        re, im = charge_mod.z_geometric(a, b, t2)
    print(f"re={format_fraction(re)} im_coeff={format_fraction(im)}")
    return 0


def cmd_charge_sigma_b(args) -> int:
    z = charge_mod.z_sigma_b(parse_fraction(args.b))
    print("; ".join(format_vector(v) for v in z.values))
    return 0


def cmd_charge_abc(args) -> int:
    z = charge_mod.z_sigma_b(parse_fraction(args.b))
    print(format_vector(charge_mod.geom_conditions_abc(z)))
    return 0


def cmd_charge_hypotheses(args) -> int:
    a = parse_triple(args.ch)
    b = parse_fraction(args.b)
    t2 = parse_fraction(args.t2) if args.t2 else b * (1 - b)
    rep = charge_mod.theorem1_hypotheses(a, b, t2)
    print(
        f"epsilon={format_fraction(rep['epsilon'])} re={format_fraction(rep['re'])} "
        f"range={'ok' if rep['ok_range'] else 'violated'} "
        f"t={'ok' if rep['ok_t'] else 'violated'} "
        f"re_sign={'ok' if rep['ok_re'] else 'violated'} "
        f"all={'ok' if rep['ok'] else 'violated'}"
    )
    return 0


def cmd_charge_verify_t(args) -> int:
    rep = charge_mod.verify_T_identity(parse_fraction(args.b))
    if rep["ok"]:
        print("OK (exact)")
        return 0
    print(
        f"FAILED: matrix_ok={rep['matrix_ok']} ox_ok={rep['ok']} at b={rep['b']}",
        file=sys.stderr,
    )
    return 3


def cmd_charge_scan(args) -> int:
    a = parse_triple(args.ch)
    b0 = parse_fraction(args.b_start)
    b1 = parse_fraction(args.b_end)
    steps = args.steps
    if steps < 2 or not b0 < b1:
        raise InputError("need b-start < b-end and at least 2 steps")
    rows = []
    for i in range(steps):
        b = b0 + (b1 - b0) * Fraction(i, steps - 1)
        t2 = parse_fraction(args.t2) if args.t2 else b * (1 - b)
        re, im = charge_mod.z_geometric(a, b, t2)
        basis = [c.triple() for c in ktheory.A1.signed_basis()]
        values = tuple(charge_mod.z_geometric(c, b, t2) for c in basis)
        ca, cb, cc = charge_mod.geom_conditions_abc(values)
        hyp = charge_mod.theorem1_hypotheses(a, b, t2)
        rows.append(
            {
                "b": str(b),
                "t2": str(t2),
                "epsilon": str(hyp["epsilon"]),
                "reZ": str(re),
                "imZ_coeff": str(im),
                "abc_a": str(ca),
                "abc_b": str(cb),
                "abc_c": str(cc),
                "hypotheses_ok": "true" if hyp["ok"] else "false",
            }
        )
    fieldnames = [
        "b", "t2", "epsilon", "reZ", "imZ_coeff", "abc_a", "abc_b", "abc_c", "hypotheses_ok",
    ]
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return 0


# ---------------------------------------------------------------------------
# module


def _load_rep(path: str) -> quiver.QuiverRep:
    return quiver.rep_from_json(load_json(path))


def cmd_module_check(args) -> int:
    rep = _load_rep(args.infile)
    ok, bad = quiver.check_relations(rep)
    if ok:
        print(f"relations OK  algebra={rep.algebra} dims={rep.dims}")
        return 0
    print(f"relations violated at arrow pair {bad}", file=sys.stderr)
    return 3


def cmd_module_jh(args) -> int:
    rep = _load_rep(args.infile)
    theta = parse_triple(args.theta)
    factors = quiver.jh_factors(rep, theta, budget=args.budget, seed=args.seed)
    if args.exact:
        for f in factors:
            s = quiver.submodule_dimvecs(f, budget=args.budget, seed=args.seed)
            if not s.complete:
                raise IncompleteOracleError(
                    f"factor of dims {f.dims}: search evidence only '{s.evidence}'"
                )
    payload = {
        "meta": json_meta(args.seed),
        "theta": [str(x) for x in theta],
        "factor_dims": [list(f.dims) for f in factors],
        "factors": [quiver.rep_to_json(f) for f in factors],
    }
    _emit(args, payload)
    return 0


def cmd_module_dual(args) -> int:
    rep = _load_rep(args.infile)
    _emit(args, quiver.rep_to_json(quiver.dualize(rep)))
    return 0


def cmd_module_tilt(args) -> int:
    rep = _load_rep(args.infile)
    if rep.algebra == "B":
        out = quiver.tilt_B_to_Bprime(rep)
        flag = None
    else:
        out, flag = quiver.tilt_Bprime_to_B(rep)
    payload = quiver.rep_to_json(out)
    if flag:
        payload["flag"] = flag
    _emit(args, payload)
    return 0


def cmd_module_hom(args) -> int:
    a = _load_rep(args.a)
    b = _load_rep(args.b)
    print(len(quiver.hom_space(a, b)))
    return 0


def cmd_module_iso(args) -> int:
    a = _load_rep(args.a)
    b = _load_rep(args.b)
    res = quiver.iso_test(a, b, seed=args.seed)
    if args.exact and res.certainty != "exact":
        raise IncompleteOracleError(
            f"only a probabilistic verdict (failure bound {res.failure_bound})"
        )
    if res.isomorphic:
        print(f"isomorphic ({res.certainty})")
    elif res.certainty == "exact":
        print("not isomorphic (exact)")
    else:
        print(f"not isomorphic (probabilistic, failure bound <= {res.failure_bound:.3e})")
    return 0


def cmd_module_from_points(args) -> int:
    cfg = geometry.PointConfig.from_json(load_json(args.points))
    kind = args.construction
    if kind == "point":
        if len(cfg) != 1:
            raise InputError("construction 'point' needs exactly one point")
        rep = geometry.module_point(cfg.points[0])
    elif kind == "ideal-A1":
        rep = geometry.module_ideal_A1(cfg)
    elif kind == "ideal-A0":
        rep = geometry.module_ideal_A0(cfg)
    else:
        rep = geometry.bprime_module_points(cfg)
    _emit(args, quiver.rep_to_json(rep))
    return 0


# ---------------------------------------------------------------------------
# walls


def cmd_walls_enumerate(args) -> int:
    _emit(args, walls_mod.walls_json(args.n, args.heart, seed=args.seed))
    return 0


def cmd_walls_theta_family(args) -> int:
    theta = walls_mod.family_theta(args.n, args.heart, parse_fraction(args.b))
    print(format_vector(theta))
    return 0


def cmd_walls_chamber(args) -> int:
    res = walls_mod.chamber_membership(parse_triple(args.theta), args.n, args.heart)
    line = f"{res.chamber}  sigma={format_fraction(res.sigma)} tau={format_fraction(res.tau)}"
    if res.blocking is not None:
        line += f"  blocked_by={format_vector(res.blocking.witness)}"
    print(line)
    return 0


def cmd_walls_svg(args) -> int:
    text = walls_mod.wall_svg(args.n, args.heart)
    io_utils.write_text_atomic(args.out, text)
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# hilbert


def cmd_hilbert_report(args) -> int:
    obj = load_json(args.points)
    if "configs" in obj:
        configs = [
            geometry.PointConfig.from_json(c if isinstance(c, dict) else {"points": c})
            for c in obj["configs"]
        ]
    elif "points" in obj:
        configs = [geometry.PointConfig.from_json(obj)]
    else:
        raise InputError("points file needs a 'configs' list or a 'points' array")
    eps = parse_fraction(args.eps) if args.eps else None
    report = walls_mod.hilbert_report(args.n, configs, seed=args.seed, eps=eps)
    if args.svg:
        io_utils.write_text_atomic(args.svg, walls_mod.wall_svg(args.n, "A1"))
    text = dump_json(args.out, report)
    if args.out is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out}")
    if args.svg:
        print(f"wrote {args.svg}")
    return 0


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(args) -> int:
    results = acceptance.run_all(args.level)
    for line in acceptance.format_results(results):
        print(line)
    return 0 if all(r.passed for r in results) else 3


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="p2stab", description=__doc__)
    sub = p.add_subparsers(dest="group", required=True)

    # chern ------------------------------------------------------------
    chern = sub.add_parser("chern", help="lattice arithmetic on character triples")
    cs = chern.add_subparsers(dest="cmd", required=True)

    x = cs.add_parser("euler", help="Euler pairing of two classes")
    x.add_argument("--a", required=True, metavar="r,d,s")
    x.add_argument("--b", required=True, metavar="r,d,s")
    x.set_defaults(func=cmd_chern_euler)

    x = cs.add_parser("mukai", help="symmetrized pairing of two classes")
    x.add_argument("--a", required=True, metavar="r,d,s")
    x.add_argument("--b", required=True, metavar="r,d,s")
    x.set_defaults(func=cmd_chern_mukai)

    x = cs.add_parser("twist", help="tensor by the k-th power of the polarization")
    x.add_argument("--ch", required=True, metavar="r,d,s")
    x.add_argument("--k", required=True, type=int)
    x.set_defaults(func=cmd_chern_twist)

    x = cs.add_parser("dimvec", help="dimension vector of a class in a heart")
    x.add_argument("--ch", required=True, metavar="r,d,s")
    x.add_argument("--heart", default="A1")
    x.set_defaults(func=cmd_chern_dimvec)

    x = cs.add_parser("bogomolov", help="discriminant of a class")
    x.add_argument("--ch", required=True, metavar="r,d,s")
    x.set_defaults(func=cmd_chern_bogomolov)

    x = cs.add_parser("expected-dim", help="expected moduli dimension of a class")
    x.add_argument("--ch", required=True, metavar="r,d,s")
    x.set_defaults(func=cmd_chern_expected_dim)

    # charge -----------------------------------------------------------
    charge_p = sub.add_parser("charge", help="central charges and their conditions")
    cs = charge_p.add_subparsers(dest="cmd", required=True)

    x = cs.add_parser("eval", help="evaluate the charge of a class")
    x.add_argument("--ch", required=True, metavar="r,d,s")
    x.add_argument("--b", required=True)
    x.add_argument("--t2", default=None, help="defaults to b(1-b)")
    x.add_argument("--form", choices=("geometric", "cha"), default="geometric")
    x.set_defaults(func=cmd_charge_eval)

    x = cs.add_parser("sigma-b", help="the three simple-object values of the b-family charge")
    x.add_argument("--b", required=True)
    x.set_defaults(func=cmd_charge_sigma_b)

    x = cs.add_parser("abc", help="the three positivity conditions at a parameter")
    x.add_argument("--b", required=True)
    x.set_defaults(func=cmd_charge_abc)

    x = cs.add_parser("hypotheses", help="check the main stability hypotheses for a class")
    x.add_argument("--ch", required=True, metavar="r,d,s")
    x.add_argument("--b", required=True)
    x.add_argument("--t2", default=None)
    x.set_defaults(func=cmd_charge_hypotheses)

    x = cs.add_parser("verify-T", help="verify the base-change matrix identity at b")
    x.add_argument("--b", required=True)
    x.set_defaults(func=cmd_charge_verify_t)

    x = cs.add_parser("scan", help="CSV scan of charge data over a parameter range")
    x.add_argument("--ch", default="2,1,0", metavar="r,d,s")
    x.add_argument("--b-start", default="1/10")
    x.add_argument("--b-end", default="9/10")
    x.add_argument("--steps", type=int, default=17)
    x.add_argument("--t2", default=None, help="fixed t2; defaults to b(1-b) pointwise")
    x.add_argument("--out", default=None)
    x.set_defaults(func=cmd_charge_scan)

    # module -----------------------------------------------------------
    module_p = sub.add_parser("module", help="quiver modules (JSON in and out)")
    cs = module_p.add_subparsers(dest="cmd", required=True)

    x = cs.add_parser("check", help="validate shapes and relations")
    x.add_argument("--in", dest="infile", required=True)
    x.set_defaults(func=cmd_module_check)

    x = cs.add_parser("jh", help="Jordan-Hoelder factors at a weight")
    x.add_argument("--in", dest="infile", required=True)
    x.add_argument("--theta", required=True, metavar="t0,t1,t2")
    x.add_argument("--budget", type=int, default=12)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--exact", action="store_true", help="demand complete searches")
    x.add_argument("--out", default=None)
    x.set_defaults(func=cmd_module_jh)

    x = cs.add_parser("dual", help="the linear dual with reversed grading")
    x.add_argument("--in", dest="infile", required=True)
    x.add_argument("--out", default=None)
    x.set_defaults(func=cmd_module_dual)

    x = cs.add_parser("tilt", help="tilt between the two relation algebras")
    x.add_argument("--in", dest="infile", required=True)
    x.add_argument("--out", default=None)
    x.set_defaults(func=cmd_module_tilt)

    x = cs.add_parser("hom", help="dimension of the intertwiner space")
    x.add_argument("--a", required=True)
    x.add_argument("--b", required=True)
    x.set_defaults(func=cmd_module_hom)

    x = cs.add_parser("iso", help="isomorphy test")
    x.add_argument("--a", required=True)
    x.add_argument("--b", required=True)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--exact", action="store_true")
    x.set_defaults(func=cmd_module_iso)

    x = cs.add_parser("from-points", help="build a module from a point configuration")
    x.add_argument("--points", required=True, help="JSON file with a 'points' array")
    x.add_argument(
        "--construction",
        choices=("point", "ideal-A1", "ideal-A0", "bprime"),
        default="ideal-A1",
    )
    x.add_argument("--out", default=None)
    x.set_defaults(func=cmd_module_from_points)

    # walls --------------------------------------------------------------
    walls_p = sub.add_parser("walls", help="weight-plane walls and chambers")
    cs = walls_p.add_subparsers(dest="cmd", required=True)

    x = cs.add_parser("enumerate", help="numerical walls for the ideal-type class")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--heart", default="A1", choices=("A1", "A0"))
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--out", default=None)
    x.set_defaults(func=cmd_walls_enumerate)

    x = cs.add_parser("theta-family", help="the weight family at a parameter")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--b", required=True)
    x.add_argument("--heart", default="A1", choices=("A1", "A0"))
    x.set_defaults(func=cmd_walls_theta_family)

    x = cs.add_parser("chamber", help="locate a weight in the chamber picture")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--heart", default="A1", choices=("A1", "A0"))
    x.add_argument("--theta", required=True, metavar="t0,t1,t2")
    x.set_defaults(func=cmd_walls_chamber)

    x = cs.add_parser("svg", help="render the weight plane")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--heart", default="A1", choices=("A1", "A0"))
    x.add_argument("--out", required=True)
    x.set_defaults(func=cmd_walls_svg)

    # hilbert ------------------------------------------------------------
    hil = sub.add_parser("hilbert", help="configuration stability report")
    cs = hil.add_subparsers(dest="cmd", required=True)

    x = cs.add_parser("report", help="full three-chamber report for configurations")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--points", required=True, help="JSON with 'configs' or 'points'")
    x.add_argument("--eps", default=None)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--out", default=None)
    x.add_argument("--svg", default=None)
    x.set_defaults(func=cmd_hilbert_report)

    # selftest -----------------------------------------------------------
    x = sub.add_parser("selftest", help="run the acceptance battery")
    x.add_argument("--level", choices=("quick", "full"), default="quick")
    x.set_defaults(func=cmd_selftest)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IncompleteOracleError as exc:
        print(f"incomplete: {exc}", file=sys.stderr)
        return 4
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
