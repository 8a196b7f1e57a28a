"""Command line front end.  Every command prints one JSON document; errors exit with code 2."""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from .curve_system import LabelingCase, build_prototype, coherence_families
from .errors import InvalidInput, SpinStrataError, UnsupportedCase
from .origami import HORIZONTAL, VERTICAL, Origami, are_isomorphic, cylinders, genus, shear_cylinder
from .origami import singularity_profile
from .spin import DEFAULT_CAP, arf_of_spin, census, component_census, kappa_gcd, parity_name

COMMANDS = ("prototype", "census", "orbit", "arf", "euclid", "shear", "salter-check", "verify")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _kappa(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InvalidInput(f"--kappa must be a comma separated list of integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--genus", type=int)
    common.add_argument("--kappa", type=_kappa)
    common.add_argument("--spin", choices=("even", "odd"))
    common.add_argument("--r", type=int)
    common.add_argument("--out", choices=("json", "dot"), default="json")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--origami-file")
    common.add_argument("--threads", type=int, default=1)
    parser = _Parser(prog="spinstrata", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "salter-check":
            p.add_argument("--no-extra", action="store_true", help="skip the completion curve in case OneTwo")
        if name == "verify":
            p.add_argument("--samples", type=int, default=100)
    return parser


# --- helpers ------------------------------------------------------------------

def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise InvalidInput(f"{args.command} needs --{', --'.join(missing)}")


def _spin_arg(args, kappa):
    if kappa_gcd(kappa) % 2:
        if args.spin is not None:
            raise InvalidInput(f"--spin is meaningless for odd gcd {kappa_gcd(kappa)}")
        return None
    if args.spin is None:
        raise InvalidInput(f"gcd {kappa_gcd(kappa)} is even, so --spin is required")
    return args.spin


def _check_genus(args, kappa):
    if args.genus is not None and sum(kappa) != 2 * args.genus - 2:
        raise InvalidInput(f"kappa sums to {sum(kappa)}, expected 2g-2 = {2 * args.genus - 2}")


def _load_origami_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path} is not JSON: {e.msg}")


def _prototype(args):
    """Prototype from --kappa/--spin, or from a prototype JSON given by --origami-file."""
    if args.origami_file:
        data = _load_origami_file(args.origami_file)
        if "kappa" not in data:
            raise InvalidInput("this command needs a prototype file (as written by the prototype command)")
        kappa = tuple(data["kappa"])
        proto = build_prototype(kappa, data.get("spin"))
        given = Origami.from_json(data.get("origami", data))
        if are_isomorphic(proto.origami, given) is None:
            raise InvalidInput("origami in the file is not the prototype of its kappa and spin")
        return proto
    _need(args, "kappa")
    _check_genus(args, args.kappa)
    return build_prototype(args.kappa, _spin_arg(args, args.kappa))


def _bare_origami(args) -> Optional[Origami]:
    if not args.origami_file:
        return None
    data = _load_origami_file(args.origami_file)
    return Origami.from_json(data.get("origami", data))


def _dot(proto) -> str:
    cs = proto.system
    lines = ["graph curves {"]
    for n in cs.curves:
        lines.append(f'  "{n}";')
    for e in sorted({tuple(sorted(map(str, v))) for v in cs.vertices}):
        lines.append(f'  "{e[0]}" -- "{e[1]}";')
    lines.append("}")
    return "\n".join(lines)


# --- commands -------------------------------------------------------------------

def cmd_prototype(args):
    proto = _prototype(args)
    if args.out == "dot":
        return _dot(proto)
    out = proto.to_json()
    phi = proto.spin_structure()
    out["spin_structure"] = phi.to_json()
    out["b_indices"] = sorted(proto.system.selected_b)
    out["arboreal"] = proto.system.is_arboreal()
    if phi.r % 2 == 0:
        out["arf"] = arf_of_spin(phi)
    return out


def cmd_census(args):
    if args.kappa is not None:
        _check_genus(args, args.kappa)
        return component_census(args.kappa, cap=args.cap)
    _need(args, "genus", "r")
    total, even, odd = census(args.r, args.genus, cap=args.cap)
    out = {"total": total}
    if even is not None:
        out.update({"even": even, "odd": odd})
    return out


def cmd_orbit(args):
    from .framed import humphries_generators, orbit_bfs, orbit_partition

    if args.kappa is not None:
        proto = _prototype(args)
        g, r = proto.g, proto.r
        if r == 1:
            raise InvalidInput("every structure is the same for r = 1")
        gens = humphries_generators(g, proto.labeling, 2 * g - 2)
        orb = orbit_bfs(proto.spin_structure(), gens, args.cap)
        return {"kappa": list(proto.system.kappa), "g": g, "r": r, "orbit_size": len(orb)}
    _need(args, "genus", "r")
    g, r = args.genus, args.r
    if r < 2 or (2 * g - 2) % r:
        raise InvalidInput(f"r must be at least 2 and divide 2g-2 = {2 * g - 2}")
    gens = humphries_generators(g, LabelingCase.ONE_TWO, 2 * g - 2)
    sizes = orbit_partition(r, g, gens, args.cap)
    return {"g": g, "r": r, "orbits": sizes, "count": len(sizes), "total": sum(sizes)}


def cmd_arf(args):
    proto = _prototype(args)
    phi = proto.spin_structure()
    if phi.r % 2:
        raise UnsupportedCase(f"parity is undefined for odd r = {phi.r}")
    bit = arf_of_spin(phi)
    return {"kappa": list(proto.system.kappa), "spin_structure": phi.to_json(), "arf": bit, "parity": parity_name(bit)}


def cmd_euclid(args):
    from .euclid import euclidean_trace, verify_trace

    _need(args, "kappa")
    _check_genus(args, args.kappa)
    trace = euclidean_trace(args.kappa, _spin_arg(args, args.kappa))
    out = trace.to_json()
    check = verify_trace(trace, args.threads)
    out["final_r"] = trace.stages[-1].r_next if trace.stages else trace.r
    out["verification"] = {"ok": check["ok"], "checked": check["checked"], "failures": check["failures"]}
    return out


def cmd_shear(args):
    from .framed import shear_realization

    o = _bare_origami(args)
    if o is not None and "kappa" not in _load_origami_file(args.origami_file):
        rows = []
        for direction in (HORIZONTAL, VERTICAL):
            for k, cy in enumerate(cylinders(o, direction)):
                iso = are_isomorphic(o, shear_cylinder(o, cy)) is not None
                rows.append({"direction": direction, "index": k, "isomorphic": iso})
        return {"cylinders": rows, "ok": all(r["isomorphic"] for r in rows)}
    proto = _prototype(args)
    rows = shear_realization(proto)
    return {
        "kappa": list(proto.system.kappa),
        "cylinders": rows,
        "ok": all(r["isomorphic"] and r["stabilizes"] for r in rows),
    }


def cmd_salter(args):
    from .euclid import completion_curve
    from .salter import salter_conditions_check

    proto = _prototype(args)
    extra = ()
    if not args.no_extra and proto.labeling is LabelingCase.ONE_TWO:
        extra = (completion_curve(proto.g, proto.r),)
    return salter_conditions_check(proto, extra=extra).to_json()


def cmd_verify(args):
    from .framed import shear_realization
    from .winding import coherence_check, leaves, random_twisted_path, twist_linearity_check

    rng = random.Random(args.seed)
    proto = _prototype(args)
    o = proto.origami
    r = proto.r
    cyls = list(proto.cylinder_of.values())
    start = proto.basis_paths()
    passed = 0
    done = 0
    while done < args.samples:
        p = random_twisted_path(start[rng.randrange(len(start))], cyls, rng)
        c = cyls[rng.randrange(len(cyls))]
        if not leaves(p, c):
            continue
        done += 1
        passed += twist_linearity_check(p, c, r)
    families = coherence_families(proto)
    coherent = sum(coherence_check(paths, chi, r) for paths, chi in families)
    out = {
        "kappa": list(proto.system.kappa),
        "seed": args.seed,
        "profile": singularity_profile(o),
        "profile_ok": singularity_profile(o) == sorted(proto.system.kappa),
        "genus": genus(o),
        "twist_linearity": {"samples": done, "passed": passed},
        "coherence": {"families": len(families), "passed": coherent},
        "shear_ok": all(x["isomorphic"] and x["stabilizes"] for x in shear_realization(proto)),
    }
    if r % 2 == 0:
        out["parity_ok"] = arf_of_spin(proto.spin_structure()) == proto.system.spin
    out["ok"] = (
        out["profile_ok"]
        and passed == done
        and coherent == len(families)
        and out["shear_ok"]
        and out.get("parity_ok", True)
    )
    return out


HANDLERS = {
    "prototype": cmd_prototype,
    "census": cmd_census,
    "orbit": cmd_orbit,
    "arf": cmd_arf,
    "euclid": cmd_euclid,
    "shear": cmd_shear,
    "salter-check": cmd_salter,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        if args.command is None:
            raise InvalidInput(f"a command is required: one of {', '.join(COMMANDS)}")
        if args.threads < 1:
            raise InvalidInput("--threads must be positive")
        result = HANDLERS[args.command](args)
    except SpinStrataError as e:
        stdout.write(json.dumps(e.to_json(), sort_keys=True) + "\n")
        return 2
    if isinstance(result, str):
        stdout.write(result + "\n")
    else:
        stdout.write(json.dumps(result, sort_keys=True) + "\n")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
