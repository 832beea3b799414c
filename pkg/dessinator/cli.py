"""This module contains the ``dessinator`` command line.

Every subcommand prints one JSON document carrying ``schema_version``. Domain errors exit with status ``1``
and their message on stderr, usage errors with status ``2``.

Example:

    .. code-block:: console

        $ dessinator dessin analyze --in torus.json
        $ dessinator modular kn --n 1
        $ dessinator superelliptic genus --n 2 --d 3

.. versionadded:: 0.1.0
"""

import argparse
import cmath
import io
import logging
import math
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence

from . import __version__
from .defaults import Settings
from .dessin import (
    aut_full_size,
    classify,
    dessin_to_json,
    dessin_type,
    dump_dessin,
    enumerate_dessins,
    euler_characteristic,
    genus,
    is_clean,
    is_uniform,
    isomorphic,
    load_dessin,
    monodromy_order,
    passport,
)
from .ends import ends_estimate, parse_oracle
from .exceptions import DessinatorError, EvaluationOverflowError
from .fpgroup import (
    abelianization,
    coset_enumeration,
    format_presentation,
    parse_presentation,
    parse_word,
    reidemeister_schreier,
    table_to_json,
)
from .homology import homology_cover
from .modular import (
    ProjectiveRational,
    a4_normalization_check,
    k_subgroup_words,
    mobius_eval,
    modular_orbifold_invariants,
    parse_mobius,
)
from .superelliptic import (
    BranchData,
    affine_equivalent,
    cosine_fixture,
    evaluate_truncated,
    genus_formula,
    monodromy_data,
    riemann_hurwitz,
    sine_fixture,
)
from .triangle import (
    Geometry,
    TriangleType,
    aut_normalizer_crosscheck,
    dessin_to_table,
    table_to_dessin,
    triangle_census,
    triangle_group_order,
)
from .utils import dumps, read_json, versioned, write_json

__all__ = ["CommandResult", "build_parser", "run", "main"]

LOG = logging.getLogger(__name__)

Payload = Dict[str, Any]


@dataclass(frozen=True)
class CommandResult:
    """Outcome of one command line invocation.

    Attributes:
        status (:obj:`int`): ``0`` on success, ``1`` on a domain error, ``2`` on a usage error
        stdout (:obj:`str`): The JSON payload
        stderr (:obj:`str`): Diagnostics
    """

    status: int
    stdout: str = ""
    stderr: str = ""


class UsageError(Exception):
    """Raised instead of exiting when the command line cannot be parsed."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r}") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _pair(z: complex) -> List[float]:
    return [z.real, z.imag]


def _points(data: Any, source: str) -> List[complex]:
    if not isinstance(data, list):
        raise DessinatorError(f"{source} must hold a JSON list of points")
    points = []
    for entry in data:
        if isinstance(entry, (int, float)):
            points.append(complex(entry))
        elif isinstance(entry, list) and len(entry) == 2:
            points.append(complex(entry[0], entry[1]))
        else:
            raise DessinatorError(f"{source}: cannot read {entry!r} as a point, use a number or [re, im]")
    return points


def _dessin_analyze(args: argparse.Namespace, settings: Settings) -> Payload:
    d = load_dessin(args.in_file)
    t = dessin_type(d)
    black, white, face = passport(d)
    flags = classify(d)
    plus_size, full_size = aut_full_size(d)
    return {
        "dessin": dessin_to_json(d),
        "passport": {"black": list(black), "white": list(white), "faces": list(face)},
        "euler_characteristic": euler_characteristic(d),
        "genus": genus(d),
        "type": list(t.as_tuple()),
        "geometry": t.geometry.value,
        "uniform": is_uniform(d),
        "clean": is_clean(d),
        "monodromy_order": monodromy_order(d),
        "aut_plus": plus_size,
        "aut_full": full_size,
        "regular": flags.regular,
        "reflexive": flags.reflexive,
        "chiral": flags.chiral,
    }


def _dessin_enumerate(args: argparse.Namespace, settings: Settings) -> Payload:
    dessins = enumerate_dessins(args.m, cap=settings.enumeration_cap, seed=args.seed, workers=args.threads)
    payload = {"edges": args.m, "count": len(dessins), "dessins": [dessin_to_json(d) for d in dessins]}
    if args.out:
        write_json(versioned(payload), args.out)
    return payload


def _dessin_cover(args: argparse.Namespace, settings: Settings) -> Payload:
    base = load_dessin(args.in_file)
    cover = homology_cover(base, args.mod, cap=settings.cover_edge_cap)
    if args.out:
        dump_dessin(cover, args.out)
    return {
        "base": dessin_to_json(base),
        "modulus": args.mod,
        "edges": cover.edge_count,
        "genus": genus(cover),
        "regular": classify(cover).regular,
        "cover": dessin_to_json(cover),
    }


def _triangle_check(args: argparse.Namespace, settings: Settings) -> Payload:
    t = TriangleType.parse(args.type)
    payload: Payload = {
        "type": list(t.as_tuple()),
        "curvature": str(t.curvature),
        "geometry": t.geometry.value,
        "order": triangle_group_order(t, settings.max_cosets) if t.geometry is Geometry.SPHERICAL else None,
    }
    if args.index is not None:
        census = triangle_census(t, args.index, max_index=settings.crosscheck_cap)
        payload["census"] = {"index": args.index, "count": len(census), "dessins": [dessin_to_json(d) for d in census]}
    return payload


def _triangle_roundtrip(args: argparse.Namespace, settings: Settings) -> Payload:
    d = load_dessin(args.in_file)
    table = dessin_to_table(d)
    plus_size, normalizer = aut_normalizer_crosscheck(d, cap=settings.crosscheck_cap)
    return {
        "type": list(dessin_type(d).as_tuple()),
        "table": table_to_json(table),
        "isomorphic": isomorphic(table_to_dessin(table), d) is not None,
        "aut_plus": plus_size,
        "normalizer_index": normalizer,
    }


def _modular_kn(args: argparse.Namespace, settings: Settings) -> Payload:
    words = k_subgroup_words(args.n, literal=args.literal)
    invariants = modular_orbifold_invariants(words, settings.max_cosets)
    payload: Payload = {"n": args.n, "generators": [str(w) for w in words], **asdict(invariants)}
    if args.normalization:
        payload["a4_normalizes"] = a4_normalization_check(
            args.n, cap=settings.normalization_cap, max_cosets=settings.max_cosets
        )
    return payload


def _modular_eval(args: argparse.Namespace, settings: Settings) -> Payload:
    word = parse_mobius(args.word)
    z = ProjectiveRational.parse(args.z)
    return {"word": str(word), "matrix": list(word.matrix), "z": str(z), "image": str(mobius_eval(word, z))}


def _ends(args: argparse.Namespace, settings: Settings) -> Payload:
    estimate = ends_estimate(parse_oracle(args.group), args.rmax, cap=settings.ball_cap)
    return {
        "group": estimate.group,
        "rmax": args.rmax,
        "classification": estimate.classification.value,
        "component_counts": estimate.component_counts,
        "sphere_sizes": estimate.sphere_sizes,
        "profiles": [
            {"inner_radius": p.inner_radius, "outer_radius": p.outer_radius, "component_count": p.component_count}
            for p in estimate.profiles
        ],
        "diagnostic": estimate.diagnostic,
    }


def _superelliptic_genus(args: argparse.Namespace, settings: Settings) -> Payload:
    branch = BranchData.simple(args.n, args.n * args.d)
    connected, order = monodromy_data(branch)
    return {
        "n": args.n,
        "d": args.d,
        "genus": genus_formula(args.n, args.d),
        "riemann_hurwitz": riemann_hurwitz(branch),
        "connected": connected,
        "monodromy_order": order,
    }


def _reference(fixture: str, z: complex) -> Optional[complex]:
    try:
        return cmath.sin(math.pi * z) if fixture == "sine" else cmath.cos(math.pi * z)
    except OverflowError:
        LOG.warning(f"{fixture}(pi z) is not representable at z = {z}, no reference value")
        return None


def _superelliptic_eval(args: argparse.Namespace, settings: Settings) -> Payload:
    fixture = sine_fixture(args.N) if args.fixture == "sine" else cosine_fixture(args.N)
    reference = _reference(args.fixture, args.z)
    try:
        value = evaluate_truncated(fixture, args.z)
    except OverflowError:
        raise EvaluationOverflowError(args.N) from None
    error: Optional[float] = None
    if reference is not None:
        error = abs(value - reference) / abs(reference) if reference else abs(value)
    return {
        "fixture": args.fixture,
        "N": args.N,
        "z": _pair(args.z),
        "value": _pair(value),
        "reference": None if reference is None else _pair(reference),
        "relative_error": error,
    }


def _superelliptic_moduli(args: argparse.Namespace, settings: Settings) -> Payload:
    zeros_a = _points(read_json(args.a), args.a)
    zeros_b = _points(read_json(args.b), args.b)
    witness = affine_equivalent(zeros_a, zeros_b, args.tol)
    return {
        "equivalent": witness is not None,
        "a": None if witness is None else _pair(witness[0]),
        "b": None if witness is None else _pair(witness[1]),
    }


def _max_cosets(args: argparse.Namespace, settings: Settings) -> int:
    return settings.max_cosets if args.max_cosets is None else int(args.max_cosets)


def _fpgroup_enumerate(args: argparse.Namespace, settings: Settings) -> Payload:
    p = parse_presentation(args.presentation)
    subgroup = [parse_word(text, p.generator_names) for text in args.subgroup]
    table = coset_enumeration(p, subgroup, max_cosets=_max_cosets(args, settings))
    return {"presentation": format_presentation(p), "index": table.index, "table": table_to_json(table)}


def _fpgroup_abelianize(args: argparse.Namespace, settings: Settings) -> Payload:
    p = parse_presentation(args.presentation)
    if args.subgroup:
        subgroup = [parse_word(text, p.generator_names) for text in args.subgroup]
        table = coset_enumeration(p, subgroup, max_cosets=_max_cosets(args, settings))
        p = reidemeister_schreier(p, table)
    result = abelianization(p)
    return {"free_rank": result.free_rank, "torsion": list(result.torsion), "structure": str(result)}


Handler = Callable[[argparse.Namespace, Settings], Payload]


def _command(subparsers: Any, name: str, handler: Handler, summary: str) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(name, help=summary)
    parser.set_defaults(handler=handler)
    return parser


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the ``dessinator`` command."""
    parser = _ArgumentParser(prog="dessinator", description="Dessins d'enfants and related group computations")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    parser.add_argument("--seed", type=int, default=None, help="shuffle randomized search orders")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for parallel searches")
    groups = parser.add_subparsers(dest="group", required=True)

    dessin = groups.add_parser("dessin", help="dessins given as permutation pairs").add_subparsers(
        dest="action", required=True
    )
    command = _command(dessin, "analyze", _dessin_analyze, "invariants of a dessin")
    command.add_argument("--in", dest="in_file", required=True, help="dessin JSON document")
    command = _command(dessin, "enumerate", _dessin_enumerate, "one dessin per isomorphism class")
    command.add_argument("--m", type=int, required=True, help="number of edges")
    command.add_argument("--out", help="also write the list to this file")
    command = _command(dessin, "cover", _dessin_cover, "mod m homology cover of a uniform dessin")
    command.add_argument("--in", dest="in_file", required=True, help="dessin JSON document")
    command.add_argument("--mod", type=int, required=True, help="modulus m")
    command.add_argument("--out", help="write the cover as a dessin document")

    triangle = groups.add_parser("triangle", help="triangle groups").add_subparsers(dest="action", required=True)
    command = _command(triangle, "check", _triangle_check, "geometry, order and subgroup census")
    command.add_argument("--type", required=True, help="triangle type such as 2,3,7")
    command.add_argument("--index", type=int, default=None, help="list the dessins of exact type on this many edges")
    command = _command(triangle, "roundtrip", _triangle_roundtrip, "dessin to coset table and back")
    command.add_argument("--in", dest="in_file", required=True, help="dessin JSON document")

    modular = groups.add_parser("modular", help="subgroups of the modular group").add_subparsers(
        dest="action", required=True
    )
    command = _command(modular, "kn", _modular_kn, "invariants of K_n")
    command.add_argument("--n", type=int, required=True, help="level n")
    command.add_argument("--literal", action="store_true", help="use the translation A^4n")
    command.add_argument("--normalization", action="store_true", help="also check that A^4 normalizes K_n")
    command = _command(modular, "eval", _modular_eval, "exact image of a point under a Möbius word")
    command.add_argument("--word", required=True, help="word in A and E, e.g. A^2*E")
    command.add_argument("--z", required=True, help="rational point or inf")

    command = _command(groups, "ends", _ends, "estimate the number of ends of a group")
    command.add_argument("--group", required=True, help="group name such as Z, Z^2, F2, Z6 or Z2*Z3")
    command.add_argument("--rmax", type=int, default=6, help="outer radius of the Cayley ball")

    superelliptic = groups.add_parser("superelliptic", help="superelliptic curves").add_subparsers(
        dest="action", required=True
    )
    command = _command(superelliptic, "genus", _superelliptic_genus, "genus of w^n = f(z) with deg f = dn")
    command.add_argument("--n", type=int, required=True, help="cover degree")
    command.add_argument("--d", type=int, required=True, help="number of blocks of n roots")
    command = _command(superelliptic, "eval", _superelliptic_eval, "evaluate a truncated Weierstrass product")
    command.add_argument("--fixture", choices=("sine", "cosine"), required=True)
    command.add_argument("--N", type=int, required=True, help="zeros +-1 .. +-N are retained")
    command.add_argument("--z", type=_complex, required=True, help="evaluation point")
    command = _command(superelliptic, "moduli", _superelliptic_moduli, "affine equivalence of two zero sets")
    command.add_argument("--a", required=True, help="JSON list of points")
    command.add_argument("--b", required=True, help="JSON list of points")
    command.add_argument("--tol", type=float, default=1e-9, help="relative tolerance")

    fpgroup = groups.add_parser("fpgroup", help="finitely presented groups").add_subparsers(
        dest="action", required=True
    )
    for name, handler, summary in (
        ("enumerate", _fpgroup_enumerate, "Todd-Coxeter coset enumeration"),
        ("abelianize", _fpgroup_abelianize, "abelianization of the group or of a subgroup"),
    ):
        command = _command(fpgroup, name, handler, summary)
        command.add_argument("--presentation", required=True, help="e.g. '< x y | x^2 y^3 (x*y)^5 >'")
        command.add_argument("--subgroup", action="append", default=[], help="subgroup generator, repeatable")
        command.add_argument("--max-cosets", type=_positive, default=None, help="overrides DESSINATOR_MAX_COSETS")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(argv: Optional[Sequence[str]] = None) -> CommandResult:
    """Parse ``argv`` and run the selected subcommand.

    Args:
        argv (:obj:`Sequence` of :obj:`str`, optional): Arguments without the program name. Default is
            :obj:`sys.argv`.

    Returns:
        :obj:`CommandResult`: Status, JSON payload and diagnostics
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    out, err = io.StringIO(), io.StringIO()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            args = parser.parse_args(argv)
    except UsageError as e:
        return CommandResult(2, "", str(e))
    except SystemExit as e:
        # --help and --version
        return CommandResult(int(e.code or 0), out.getvalue(), err.getvalue())

    _configure_logging(args.verbose)
    if args.threads < 1:
        return CommandResult(2, "", f"{parser.prog}: error: --threads must be positive, got {args.threads}\n")
    try:
        settings = Settings.from_env()
        payload = args.handler(args, settings)
    except DessinatorError as e:
        LOG.debug(f"{args.group} failed: {e!r}")
        return CommandResult(1, "", f"error: {e}\n")
    return CommandResult(0, dumps(versioned(payload)) + "\n", "")


def main() -> None:
    result = run()
    sys.stdout.write(result.stdout)
    sys.stderr.write(result.stderr)
    sys.exit(result.status)
