"""Batch command-line front end.

Every computation in the library is exposed as a subcommand with
machine-readable JSON output (default) or human-readable text.  Output is
byte-stable across runs; progress of long computations goes to stderr only.

Exit codes: 0 on success, 1 when a requested check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import fixtures, verify
from .exactq import qq
from .freealg import (
    antipode,
    element_to_text,
    lyndon_words,
    parse_element,
    parse_fixture_elements,
    shuffle,
    concat,
    volume_element,
)
from .invariants import (
    conjecture_evidence,
    dim_image,
    inv_d_space,
    invariant_space,
    is_invariant,
    kernel_space,
    loopclosure_membership,
    loopclosure_space,
    timerev_space,
)
from .parallel import set_max_threads
from .posgeom import (
    PermGroup,
    gale_facets,
    moment_curve_instance,
    polytope_volume,
    signed_volume,
    stabilizer_bruteforce,
    stabilizer_structural,
)
from .sigpoly import PLPath, pair, pl_signature, polynomial_to_text, signature_polynomial


def _parse_path(text: str) -> PLPath:
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            points.append([qq(c) for c in chunk.split(",")])
    return PLPath(points)


def _load_fixture(spec: str, d: int | None):
    """Fixture elements from a filesystem path or a bundled file name."""
    if os.path.exists(spec):
        with open(spec) as handle:
            return parse_fixture_elements(handle.read(), d)
    try:
        return parse_fixture_elements(fixtures.fixture_text(spec), d)
    except FileNotFoundError:
        raise SystemExit(f"fixture not found: {spec}")


def _signature_json(sig) -> dict:
    coeffs = {}
    for w in sorted(sig.terms, key=lambda w: (len(w), w)):
        coeffs["".join(map(str, w)) or "e"] = str(sig.terms[w])
    return {"d": sig.d, "maxdeg": sig.maxdeg, "coefficients": coeffs}


def _group_for(name: str, d: int, n: int) -> PermGroup:
    if name == "auto":
        return stabilizer_structural(d, n)
    if name == "trivial":
        return PermGroup.generated(n, [], "trivial")
    if name == "cyclic":
        from .posgeom import _rotation

        return PermGroup.generated(n, [_rotation(n)], "Z/n")
    if name == "dihedral":
        from .posgeom import _reversal, _rotation

        return PermGroup.generated(n, [_rotation(n), _reversal(n)], "D_n")
    if name == "full":
        from .posgeom import Permutation

        gens = [Permutation.from_cycles(n, (1, 2))]
        if n > 2:
            gens.append(Permutation(list(range(2, n + 1)) + [1]))
        return PermGroup.generated(n, gens, "S_n")
    raise SystemExit(f"unknown group {name!r}")


def _emit(data, fmt: str, text_render=None) -> None:
    if fmt == "json":
        print(json.dumps(data))
    else:
        if text_render is None:
            print(json.dumps(data, indent=2))
        else:
            print(text_render(data))


def _space_output(basis, fmt: str, with_image: int | None = None) -> None:
    image = dim_image(basis, with_image) if with_image is not None else None
    data = basis.to_json(dim_image=image)
    _emit(
        data,
        fmt,
        lambda d: "\n".join(
            [f"dim_raw = {d['dim_raw']}"]
            + ([f"dim_image = {d['dim_image']}"] if "dim_image" in d else [])
            + [f"  {b}" for b in d["basis"]]
        ),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigvol",
        description="Exact signature polynomials, positive-matrix stabilizers and volume invariants",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--threads", type=int, default=1, help="bound on internal parallelism")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shuffle", help="shuffle product of two elements")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--d", type=int)

    p = sub.add_parser("concat", help="concatenation product of two elements")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--d", type=int)

    p = sub.add_parser("antipode", help="signed word reversal of an element")
    p.add_argument("x")
    p.add_argument("--d", type=int)

    p = sub.add_parser("vol", help="signed-volume element")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--letters", help="letter subset, e.g. 124")

    p = sub.add_parser("lyndon", help="Lyndon words of one degree")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("signature", help="truncated signature of a path")
    p.add_argument("--path", required=True, help="control points 'x1,y1;x2,y2;...'")
    p.add_argument("--maxdeg", type=int, required=True)

    p = sub.add_parser("pair", help="signature functional applied to an element")
    p.add_argument("--path", required=True)
    p.add_argument("--element")
    p.add_argument("--fixture")
    p.add_argument("--name", help="element name inside the fixture file")
    p.add_argument("--d", type=int)

    p = sub.add_parser("hmap", help="signature polynomial of an element on n points")
    p.add_argument("element")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--coords", choices=("increments", "points"), default="increments")

    p = sub.add_parser("stabilizer", help="positivity stabilizer subgroup of S_n")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("auto", "structural", "brute"), default="structural")

    p = sub.add_parser("gale", help="facets of the cyclic polytope by the evenness criterion")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("volume", help="signed and triangulation volume of a positive instance")
    p.add_argument("--moment-curve", required=True, help="increasing parameters t1,t2,...")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("inv-space", help="graded invariants of a group action on control points")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--group", choices=("auto", "trivial", "cyclic", "dihedral", "full"), default="auto")

    p = sub.add_parser("kernel-space", help="graded kernel of the n-point signature map")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("timerev-space", help="antipode-fixed elements of one degree")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("loopclosure-space", help="loop-closure invariants of one degree")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--segments", type=int, help="segment count override")

    p = sub.add_parser("inv-d", help="simultaneous invariants of one degree (all point counts)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("check-element", help="membership checks for fixture elements")
    p.add_argument("--fixture", required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--check", default="invariant", help="comma list: invariant,kernel,timerev,loopclosure")
    p.add_argument("--segments", type=int)

    p = sub.add_parser("conjecture", help="evidence report for the d+2-point conjecture")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("reproduce-paper", help="run the bundled verification suite")
    p.add_argument("--only", type=int, action="append", help="restrict to one criterion (repeatable)")

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_max_threads(args.threads)
    fmt = args.format

    if args.command in ("shuffle", "concat"):
        x = parse_element(args.x, args.d)
        y = parse_element(args.y, args.d)
        d = max(x.d, y.d)
        x, y = parse_element(args.x, d), parse_element(args.y, d)
        result = shuffle(x, y) if args.command == "shuffle" else concat(x, y)
        _emit({"element": element_to_text(result)}, fmt, lambda data: data["element"])
        return 0

    if args.command == "antipode":
        x = parse_element(args.x, args.d)
        _emit({"element": element_to_text(antipode(x))}, fmt, lambda data: data["element"])
        return 0

    if args.command == "vol":
        letters = tuple(int(ch) for ch in args.letters) if args.letters else None
        x = volume_element(args.d, letters)
        _emit({"element": element_to_text(x)}, fmt, lambda data: data["element"])
        return 0

    if args.command == "lyndon":
        words = ["".join(map(str, w)) for w in lyndon_words(args.d, args.k)]
        _emit({"d": args.d, "k": args.k, "count": len(words), "words": words}, fmt,
              lambda data: " ".join(data["words"]))
        return 0

    if args.command == "signature":
        sig = pl_signature(_parse_path(args.path), args.maxdeg)
        data = _signature_json(sig)
        _emit(data, fmt, lambda d: "\n".join(f"{w}: {c}" for w, c in d["coefficients"].items()))
        return 0

    if args.command == "pair":
        path = _parse_path(args.path)
        if args.element:
            elements = {"element": parse_element(args.element, args.d or path.d)}
        elif args.fixture:
            elements = _load_fixture(args.fixture, args.d)
            if args.name:
                elements = {args.name: elements[args.name]}
        else:
            raise SystemExit("pair needs --element or --fixture")
        maxdeg = max(x.degree() for x in elements.values())
        sig = pl_signature(path, max(maxdeg, 1))
        values = {name: str(pair(sig, x)) for name, x in elements.items()}
        _emit({"values": values}, fmt,
              lambda d: "\n".join(f"{k} = {v}" for k, v in d["values"].items()))
        return 0

    if args.command == "hmap":
        x = parse_element(args.element, args.d)
        poly = signature_polynomial(x, args.n)
        if args.coords == "points":
            from .sigpoly import polynomial_to_x_text

            rendered = polynomial_to_x_text(poly)
        else:
            rendered = polynomial_to_text(poly)
        _emit({"n": args.n, "d": x.d, "polynomial": rendered}, fmt,
              lambda data: data["polynomial"])
        return 0

    if args.command == "stabilizer":
        if args.method == "brute":
            group = stabilizer_bruteforce(args.d, args.n)
        else:
            group = stabilizer_structural(args.d, args.n)
        _emit(group.to_json(), fmt,
              lambda data: f"{data['structure_tag']} of order {data['order']}")
        return 0

    if args.command == "gale":
        facets = [list(f) for f in gale_facets(args.d, args.n)]
        _emit({"d": args.d, "n": args.n, "facets": facets}, fmt,
              lambda data: "\n".join("".join(map(str, f)) for f in data["facets"]))
        return 0

    if args.command == "volume":
        params = [qq(t) for t in args.moment_curve.split(",")]
        inst = moment_curve_instance(args.d, len(params), params)
        sv, tv = signed_volume(inst.path), polytope_volume(inst)
        _emit({"signed_volume": str(sv), "triangulation_volume": str(tv)}, fmt,
              lambda data: f"{data['signed_volume']}\n{data['triangulation_volume']}")
        return 0

    if args.command == "inv-space":
        group = _group_for(args.group, args.d, args.n)
        basis = invariant_space(args.d, args.n, args.k, group)
        _space_output(basis, fmt, with_image=args.n)
        return 0

    if args.command == "kernel-space":
        _space_output(kernel_space(args.d, args.n, args.k), fmt)
        return 0

    if args.command == "timerev-space":
        _space_output(timerev_space(args.d, args.k), fmt)
        return 0

    if args.command == "loopclosure-space":
        _space_output(loopclosure_space(args.d, args.k, segments=args.segments), fmt)
        return 0

    if args.command == "inv-d":
        _space_output(inv_d_space(args.d, args.k), fmt)
        return 0

    if args.command == "check-element":
        checks = [c.strip() for c in args.check.split(",") if c.strip()]
        elements = _load_fixture(args.fixture, args.d)
        report = {}
        ok = True
        for name, x in elements.items():
            entry = {}
            for check in checks:
                if check == "invariant":
                    if args.n is None:
                        raise SystemExit("check 'invariant' needs --n")
                    entry[check] = is_invariant(x, x.d, args.n)
                elif check == "kernel":
                    if args.n is None:
                        raise SystemExit("check 'kernel' needs --n")
                    entry[check] = signature_polynomial(x, args.n).is_zero()
                elif check == "timerev":
                    entry[check] = antipode(x) == x
                elif check == "loopclosure":
                    entry[check] = loopclosure_membership(x, segments=args.segments)
                else:
                    raise SystemExit(f"unknown check {check!r}")
                ok = ok and entry[check]
            report[name] = entry
        _emit({"checks": report, "pass": ok}, fmt,
              lambda data: "\n".join(f"{k}: {v}" for k, v in data["checks"].items()))
        return 0 if ok else 1

    if args.command == "conjecture":
        report = conjecture_evidence(args.d, args.k)
        _emit(report, fmt,
              lambda data: f"dim_image={data['dim_image']} predicted={data['predicted_dim_image']} -> {data['verdict']}")
        return 0

    if args.command == "reproduce-paper":
        results = verify.run_all(only=args.only, progress=lambda msg: print(msg, file=sys.stderr))
        if fmt == "json":
            print(json.dumps(results))
        else:
            width = max(len(r["description"]) for r in results)
            for r in results:
                status = "PASS" if r["pass"] else "FAIL"
                print(f"{status}  {r['criterion']:2d}  {r['description']:<{width}}  {r['seconds']:7.1f}s")
        return 0 if all(r["pass"] for r in results) else 1

    raise SystemExit(2)


def main() -> None:
    sys.exit(run())
