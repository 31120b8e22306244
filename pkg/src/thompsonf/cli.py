"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 parse or usage error,
3 not a solution, 4 commutator decomposition not found, 5 not in the image
of the integer embedding.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from .definable import Mode
from .element import (
    abelianise,
    breakpoint_strings,
    endpoint_slopes,
    fixed_decomposition,
    format_word,
    support,
    word_to_element,
)
from .equations import assignment_from_json, check_system, dump_assignment, parse_group_system, serialize_group_system
from .errors import (
    DecompositionNotFound,
    NotASolution,
    NotInImage,
    ParseError,
    ResourceLimit,
    ThompsonError,
    UnboundVariable,
)
from .polynomial import normalize, parse_poly_system
from .reduction import VarMap, decode, encode, file_oracle, search_oracle, witness
from .solver import brute_force_solve, enumerate_ball

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_NOT_SOLUTION, EXIT_NO_DECOMPOSITION, EXIT_NOT_IN_IMAGE = range(6)

GRAMMARS = """\
grammars:
  element word    word := "id" | term (" " term)* ; term := ("x0"|"x1") ("^" signed-int)?
  polynomial      stmt := poly "=" poly ; poly := mono ("+" mono)* ;
                  mono := NAT | NAT "*" factors | factors ; factors := VAR ("*" VAR)*
  group system    line := comment | "const" NAME "=" word | side "=" side ;
                  side := "1" | atom+ ; atom := ("$" VAR | NAME) ("^-1")?
                  builtin names: x0 x1 x0p x1p x1pp l
  assignment      JSON object: name -> {"word": ...} or {"breakpoints": [["p/2^e","q/2^e"], ...]}
"""


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _parse_assign(text: str) -> Dict[str, int]:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, value = part.partition("=")
        if not sep:
            raise _UsageError(f"expected NAME=VALUE, got {part!r}")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise _UsageError(f"value for {name.strip()} is not an integer") from None
    return out


def cmd_reduce(args) -> int:
    P = normalize(parse_poly_system(_read(args.input)))
    system, vm = encode(P, Mode(args.mode))
    _write(args.output, serialize_group_system(system))
    if args.map:
        _write(args.map, vm.dumps())
    return EXIT_OK


def cmd_witness(args) -> int:
    P = normalize(parse_poly_system(_read(args.input)))
    oracle = None
    if args.mode == "paper":
        oracle = search_oracle(args.search_radius)
        if args.decompositions:
            oracle = file_oracle(_load_json(args.decompositions), oracle)
    a = witness(P, _parse_assign(args.assign), Mode(args.mode), oracle)
    _write(args.output, dump_assignment(a))
    return EXIT_OK


def cmd_verify(args) -> int:
    system = parse_group_system(_read(args.system))
    a = assignment_from_json(_load_json(args.assignment))
    ok = check_system(system, a)
    print("satisfied" if ok else "not satisfied")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_decode(args) -> int:
    a = assignment_from_json(_load_json(args.assignment))
    vm = VarMap.from_json(_load_json(args.map))
    values = decode(a, vm)
    print(" ".join(f"{k}={v}" for k, v in values.items()))
    return EXIT_OK


def cmd_solve(args) -> int:
    system = parse_group_system(_read(args.system))
    fixed = assignment_from_json(_load_json(args.fixed)) if args.fixed else None
    names = [v.strip() for v in args.vars.split(",") if v.strip()] if args.vars else None
    ball = enumerate_ball(args.radius)
    words = {e: w for e, w in zip(ball.elements, ball.words)}
    result = brute_force_solve(system, args.radius, names, fixed, exhaustive=args.all, ball=ball)
    solutions = result if args.all else ([result] if result is not None else [])
    if not solutions:
        print("none found within radius")
        return EXIT_OK
    searched = names if names is not None else [v for v in system.variables if not fixed or v not in fixed]
    for sol in solutions:
        print(" ".join(f"{v}={format_word(words[sol[v]])}" for v in searched))
    return EXIT_OK


def cmd_eval(args) -> int:
    f = word_to_element(args.word)
    pts = " ".join(f"({x}, {y})" for x, y in breakpoint_strings(f))
    a, b = endpoint_slopes(f)
    e0, e1 = abelianise(f)
    print(f"breakpoints: {pts}")
    print(f"support: {support(f)}")
    print(f"endpoint_slopes: {a} {b}")
    print(f"abelianise: {e0} {e1}")
    return EXIT_OK


def cmd_centralise(args) -> int:
    print(fixed_decomposition(word_to_element(args.word)))
    return EXIT_OK


def cmd_ball(args) -> int:
    ball = enumerate_ball(args.radius)
    if args.count:
        print(len(ball))
    else:
        for w in ball.words:
            print(format_word(w))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thompsonf",
        description="Exact computation in Thompson's group F and reduction of "
                    "polynomial systems over the non-negative integers to equations over F.",
        epilog=GRAMMARS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="encode a polynomial system as a group system")
    p.add_argument("--mode", choices=["germ", "paper"], default="germ")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--map")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("witness", help="build a verified group solution from an integer solution")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--mode", choices=["germ", "paper"], default="germ")
    p.add_argument("--assign", required=True, help='e.g. "A=2,B=3"')
    p.add_argument("-o", "--output")
    p.add_argument("--decompositions", help="JSON list of verified commutator decompositions (paper mode)")
    p.add_argument("--search-radius", type=int, default=3)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="check an assignment against a group system")
    p.add_argument("-s", "--system", required=True)
    p.add_argument("-a", "--assignment", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", help="read integers back from a group assignment")
    p.add_argument("-a", "--assignment", required=True)
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("solve", help="bounded brute-force search over a ball of F")
    p.add_argument("-s", "--system", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--vars", help="comma-separated variables to search; others come from --fixed")
    p.add_argument("--fixed", help="assignment JSON for the variables not searched")
    p.add_argument("--all", action="store_true", help="list every solution in the ball")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="print breakpoints, support and exponent sums of a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("centralise", help="print the fixed-point decomposition of a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_centralise)

    p = sub.add_parser("ball", help="enumerate the ball of given radius")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_ball)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (_UsageError, UnboundVariable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotASolution as exc:
        print(f"not a solution: {exc}", file=sys.stderr)
        return EXIT_NOT_SOLUTION
    except DecompositionNotFound as exc:
        print(f"decomposition not found: {exc}", file=sys.stderr)
        return EXIT_NO_DECOMPOSITION
    except NotInImage as exc:
        print(f"not in image: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_IMAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except (ThompsonError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
