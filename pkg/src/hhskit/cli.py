"""Command-line entry point: ``hhskit <group> <command> [options]``.

Exit status is 0 on success, 1 on a domain error (bad parameters for the
mathematics) and 2 on a usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from .arith import ArithmeticDomainError, parse_int
from .hhs import HhsInstance, InconsistentInstanceError, affine_hhs, dl_hhs


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int
    output: str  # "human" or "json"
    json_path: str | None = None
    overrides: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


def _int_arg(text: str) -> int:
    try:
        return parse_int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _pair_arg(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}")
    return _int_arg(parts[0]), _int_arg(parts[1])


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(_int_arg(t) for t in text.split(",") if t)


def _u_list(text: str) -> tuple[int | None, ...]:
    """Comma-separated u-coordinates; "inf" is the point at infinity."""
    return tuple(None if t.strip().lower() in ("inf", "infinity") else _int_arg(t)
                 for t in text.split(","))


def parse_instance(spec: str) -> HhsInstance:
    """affine:p:d | dlog:m[:n] | cm:p:t[:l1,l2,...]"""
    kind, *rest = spec.split(":")
    try:
        if kind == "affine" and len(rest) == 2:
            return affine_hhs(parse_int(rest[0]), parse_int(rest[1]))
        if kind == "dlog" and len(rest) in (1, 2):
            return dl_hhs(parse_int(rest[0]), parse_int(rest[1]) if len(rest) == 2 else None)
        if kind == "cm" and len(rest) in (2, 3):
            from .isogeny import cm_hhs, find_instance
            ells = _int_list(rest[2]) if len(rest) == 3 else None
            return cm_hhs(find_instance(parse_int(rest[0]), parse_int(rest[1]), ells))
    except ValueError as exc:
        if isinstance(exc, ArithmeticDomainError):
            raise
        raise UsageError(f"bad instance spec {spec!r}: {exc}")
    raise UsageError(f"bad instance spec {spec!r}; use affine:p:d, dlog:m[:n] or cm:p:t[:ells]")


# -- handlers ------------------------------------------------------------------

def cmd_hhs_keyex(args) -> dict:
    from .protocols import dhm_run
    inst = parse_instance(args.instance)
    tr = dhm_run(inst, args.seed_a, args.seed_b)
    out = tr.to_json(inst)
    out["agreed"] = tr.agreed
    return out


def cmd_hhs_schnorr(args) -> dict:
    from .protocols import CheatingProver, Prover, schnorr_identify, schnorr_keygen
    inst = parse_instance(args.instance)
    keys = schnorr_keygen(inst, args.seed)
    if args.cheat:
        prover = CheatingProver(inst, keys.public, args.cheat)
    else:
        prover = Prover(inst, keys.public, keys.secret)
    verifier = random.SystemRandom() if args.real_entropy else args.seed + 1
    res = schnorr_identify(inst, keys.public, prover, args.rounds, args.seed + 2, verifier)
    out = res.to_json(inst)
    out.update({"instance": inst.describe(), "h0": inst.encode_point(keys.public.h0),
                "h_a": inst.encode_point(keys.public.h_a),
                "prover": args.cheat or "honest"})
    return out


def cmd_attack_riesel(args) -> dict:
    from .attacks import RieselInstance, riesel_dlog
    res = riesel_dlog(RieselInstance(args.p, args.k, args.b, args.c))
    return res.to_json()


def cmd_attack_smart(args) -> dict:
    from .attacks import AnomalousInstance, sass_dlog
    from .elliptic import curve_over_fp
    E = curve_over_fp(args.p, args.a1, args.a2, args.a3, args.a4, args.a6)
    P, Q = E.point(*args.P), E.point(*args.Q)
    res = sass_dlog(AnomalousInstance(E, P, Q), precision=args.precision, order=args.order,
                    seed=args.seed)
    return res.to_json()


def _torus(args):
    from .torus import TorusParams
    return TorusParams.create(args.q, args.D)


def _xy_json(P):
    return [_elem_json(P.x), _elem_json(P.y)]


def _elem_json(a):
    return a.coeffs[0] if a.field.degree == 1 else list(a.coeffs)


def _torus_points(args, T, count: int) -> list:
    from .torus import point, xy_from_u
    if args.u is not None:
        if len(args.u) != count:
            raise UsageError(f"--u expects {count} value(s)")
        return [xy_from_u(u, T) for u in args.u]
    given = [args.P] + ([args.Q] if count == 2 else [])
    if any(v is None for v in given):
        raise UsageError("give the points with --P/--Q or with --u")
    return [point(T, *v) for v in given]


def cmd_torus_mul(args) -> dict:
    from .torus import mul_u, mul_xy, u_from_xy
    T = _torus(args)
    P, Q = _torus_points(args, T, 2)
    R = mul_xy(P, Q, T)
    u = mul_u(u_from_xy(P, T), u_from_xy(Q, T), T)
    return {"q": T.q, "D": _elem_json(T.D), "product": _xy_json(R),
            "u": None if u is None else _elem_json(u)}


def cmd_torus_exp(args) -> dict:
    from .torus import exp_xy, pow_xy
    T = _torus(args)
    P, = _torus_points(args, T, 1)
    R = exp_xy(P, args.k, T)
    if args.k <= 10 ** 4 and pow_xy(P, args.k, T) != R:
        raise InconsistentInstanceError("closed formula disagrees with iteration")
    return {"q": T.q, "D": _elem_json(T.D), "k": args.k, "power": _xy_json(R)}


def cmd_torus_order(args) -> dict:
    from .arith import cyclotomic_value
    from .torus import t2_order, td_subgroup
    if args.d == 2:
        T = _torus(args)
        n = t2_order(T)
        return {"q": args.q, "d": 2, "D": _elem_json(T.D), "order": n, "expected": args.q + 1}
    sub = td_subgroup(args.q, args.d)
    return {"q": args.q, "d": args.d, "order": sub.cardinality,
            "expected": cyclotomic_value(args.d, args.q)}


def _cm_params(args):
    from .isogeny import find_instance
    return find_instance(args.p, args.t, args.ells, seed=args.seed)


def cmd_isog_instance(args) -> dict:
    from .isogeny import class_number
    params = _cm_params(args)
    out = params.to_json()
    out["class_number"] = class_number(params.disc)
    return out


def cmd_isog_graph(args) -> dict:
    from .isogeny import build_graph, spectrum_report, uniform_residual
    params = _cm_params(args)
    g = build_graph(params)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(g.to_dot())
    rep = spectrum_report(g)
    out = g.to_json()
    out.update({"params": params.to_json(), "regular": g.is_regular(),
                "connected": g.is_connected(), "spectrum": rep.to_json(),
                "uniform_residual": uniform_residual(g)})
    out["spectrum"]["eigenvalues"] = [round(x, 9) + 0.0 for x in rep.eigenvalues]
    out["spectrum"]["second"] = round(rep.second, 9)
    out["uniform_residual"] = round(out["uniform_residual"], 9) + 0.0
    return out


def cmd_isog_hash(args) -> dict:
    from .isogeny import hash_walk
    params = _cm_params(args)
    try:
        msg = bytes.fromhex(args.message)
    except ValueError:
        raise UsageError(f"--message must be hex, got {args.message!r}")
    origin = params.base_j if args.origin is None else args.origin
    return {"params": params.to_json(), "origin": origin, "message": args.message,
            "hash": hash_walk(params, origin, msg)}


def cmd_isog_keyex(args) -> dict:
    from .isogeny import cm_hhs
    from .protocols import dhm_run
    inst = cm_hhs(_cm_params(args))
    tr = dhm_run(inst, args.seed_a, args.seed_b)
    out = tr.to_json(inst)
    out["agreed"] = tr.agreed
    return out


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hhskit",
                                     description="Hard homogeneous spaces toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_int_arg, default=0)
    common.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                        help="emit JSON (to PATH, or stdout when no path is given)")
    groups = parser.add_subparsers(dest="group", required=True)

    def add(sub, name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func, command=name)
        return p

    hhs = groups.add_parser("hhs", help="generic protocols").add_subparsers(dest="cmd", required=True)
    p = add(hhs, "keyex", cmd_hhs_keyex, "Diffie-Hellman-Merkle exchange")
    p.add_argument("--instance", default="affine:5:2")
    p.add_argument("--seed-a", type=_int_arg, default=1)
    p.add_argument("--seed-b", type=_int_arg, default=2)
    p = add(hhs, "schnorr", cmd_hhs_schnorr, "zero-knowledge identification")
    p.add_argument("--instance", default="affine:5:2")
    p.add_argument("--rounds", type=int, default=20)
    p.add_argument("--cheat", nargs="?", const="guess", default=None,
                   choices=["guess", "answer0", "answer1"])
    p.add_argument("--real-entropy", action="store_true",
                   help="draw challenges from the OS entropy source")

    atk = groups.add_parser("attack", help="weak-instance logarithms").add_subparsers(dest="cmd", required=True)
    p = add(atk, "riesel", cmd_attack_riesel, "logarithm in (Z/p^k Z)^*")
    for name in ("--p", "--k", "--b", "--c"):
        p.add_argument(name, type=_int_arg, required=True)
    p = add(atk, "smart", cmd_attack_smart, "logarithm on an anomalous curve")
    p.add_argument("--p", type=_int_arg, required=True)
    for name in ("--a1", "--a2", "--a3", "--a4", "--a6"):
        p.add_argument(name, type=_int_arg, default=0)
    p.add_argument("--P", type=_pair_arg, required=True)
    p.add_argument("--Q", type=_pair_arg, required=True)
    p.add_argument("--precision", type=int, default=8)
    p.add_argument("--order", type=int, default=None,
                   help="use the formal logarithm truncated at this order")

    tor = groups.add_parser("torus", help="Lucas torus and cyclotomic subgroups").add_subparsers(dest="cmd", required=True)
    for name, func in (("mul", cmd_torus_mul), ("exp", cmd_torus_exp), ("order", cmd_torus_order)):
        p = add(tor, name, func, f"torus {name}")
        p.add_argument("--q", type=_int_arg, required=True)
        p.add_argument("--D", type=_int_arg, default=None)
        if name in ("mul", "exp"):
            p.add_argument("--P", type=_pair_arg, default=None, help="point as x,y")
            p.add_argument("--u", type=_u_list, default=None,
                           help="point(s) by u-coordinate, comma separated; inf allowed")
        if name == "mul":
            p.add_argument("--Q", type=_pair_arg, default=None)
        elif name == "exp":
            p.add_argument("--k", type=_int_arg, required=True)
        else:
            p.add_argument("--d", type=int, default=2, choices=[1, 2, 3, 4, 6])

    iso = groups.add_parser("isog", help="class-group action on curves").add_subparsers(dest="cmd", required=True)
    for name, func in (("instance", cmd_isog_instance), ("graph", cmd_isog_graph),
                       ("hash", cmd_isog_hash), ("keyex", cmd_isog_keyex)):
        p = add(iso, name, func, f"isogeny {name}")
        p.add_argument("--p", type=_int_arg, default=101)
        p.add_argument("--t", type=_int_arg, default=None if name == "instance" else 3)
        p.add_argument("--ells", type=_int_list, default=None)
        if name == "graph":
            p.add_argument("--dot", default=None)
        elif name == "hash":
            p.add_argument("--message", required=True)
            p.add_argument("--origin", type=_int_arg, default=None)
        elif name == "keyex":
            p.add_argument("--seed-a", type=_int_arg, default=1)
            p.add_argument("--seed-b", type=_int_arg, default=2)
    return parser


def _human(data, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_human(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}: [{len(value)} items]")
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def load_schema(subcommand: str) -> dict:
    """Shipped JSON schema for a subcommand such as "attack riesel"."""
    from importlib.resources import files
    name = subcommand.replace(" ", "_") + ".json"
    return json.loads(files("hhskit").joinpath("schemas", name).read_text())


def dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = RunConfig(f"{args.group} {args.command}", args.seed,
                       "json" if args.json else "human", None if args.json == "-" else args.json)
    try:
        result = args.func(args)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"hhskit: error: {exc}", file=stderr)
        return 2
    except (ArithmeticDomainError, InconsistentInstanceError, ZeroDivisionError) as exc:
        print(f"hhskit: {config.subcommand}: {exc}", file=stderr)
        return 1
    if config.output == "json":
        text = dump_json(result)
        if config.json_path:
            with open(config.json_path, "w") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    else:
        stdout.write(_human(result) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
