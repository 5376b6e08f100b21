"""Command-line surface: classify, fixed-point, orbit, semigroup, witness, inverse-image.

Exit codes
    0   success (classify/semigroup: Distal)
    1   classify/semigroup: NotDistal
    2   classify/semigroup: Inconclusive
    3   no covered construction (failed hypothesis, uncovered class,
        wrong spectrum, non-isometry, unsupported dimension)
    64  unparsable input (bad JSON, bad flags, bad schema)
    65  singular matrix
    66  invalid translation (zero, degenerate, or non-injective regime)
    70  unexpected internal failure

Angles are radians everywhere; values carrying a degree marker are
rejected outright.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import __version__
from .config import DEFAULT_CONFIG, load_config
from .distality import (
    Verdict,
    classify_projective_distality,
    semigroup_distality_test,
)
from .errors import (
    DegenerateMap,
    DimensionMismatch,
    DimensionUnsupported,
    HypothesisNotMet,
    InvalidTranslation,
    NoPositiveRealEigenvalue,
    NotOrthogonal,
    OutsideCoveredClasses,
    RealSpectrum,
    SingularMatrix,
    SpecParseError,
    SphereDistalError,
    ZeroTranslation,
)
from .fixed_points import (
    FixedPointResult,
    choose_nondistal_witness,
    find_fixed_point_complex,
    find_fixed_point_real_positive,
    isometry_even_sphere_witness,
    minus_id_period2_points,
)
from .linalg import (
    ComplexPair,
    JordanBlock,
    determinant,
    normalize_to_unimodular,
    real_schur_2x2,
    rotation,
)
from .serialize import (
    certificate_to_json,
    dump_json,
    fixed_point_to_json,
    load_matrix,
    load_semigroup_spec,
    matrix_to_json,
    orbit_to_csv,
    orbit_to_svg,
    periodic_points_to_json,
    run_report,
    verdict_to_json,
)
from .sphere import (
    AffineSphereMap,
    Regime,
    affine_inverse_image,
    affine_is_homeomorphism,
    apply_affine,
    orbit,
)

EXIT_DISTAL = 0
EXIT_NOT_DISTAL = 1
EXIT_INCONCLUSIVE = 2
EXIT_UNCOVERED = 3
EXIT_PARSE = 64
EXIT_SINGULAR = 65
EXIT_TRANSLATION = 66
EXIT_INTERNAL = 70

_VERDICT_EXIT = {
    Verdict.DISTAL: EXIT_DISTAL,
    Verdict.NOT_DISTAL: EXIT_NOT_DISTAL,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class _CliUsage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which collides with the
    # Inconclusive verdict; route usage problems to the parse exit code.
    def error(self, message):
        raise _CliUsage(message)


def _parse_angle(text: str) -> float:
    lowered = text.strip().lower()
    if "deg" in lowered or "°" in lowered:
        raise SpecParseError("angles are accepted in radians only")
    try:
        return float(text)
    except ValueError as exc:
        raise SpecParseError(f"bad angle {text!r}: {exc}") from exc


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")], dtype=float)
    except ValueError as exc:
        raise SpecParseError(f"bad vector {text!r}: {exc}") from exc


def _resolve_matrix(args) -> np.ndarray:
    if getattr(args, "rot", None) is not None:
        if args.matrix is not None:
            raise SpecParseError("give either a matrix file or --rot, not both")
        return rotation(_parse_angle(args.rot))
    if args.matrix is None:
        raise SpecParseError("a matrix file (or --rot) is required")
    return load_matrix(args.matrix)


def _apply_overrides(config, args):
    overrides = {}
    for name in (
        "unit_norm_tol",
        "spectral_tol",
        "rank_tol",
        "residual_tol",
        "bisection_tol",
        "singular_tol",
        "classify_tol",
    ):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.seed is not None:
        overrides["rng_seed"] = args.seed
    return config.replace(**overrides) if overrides else config


def build_parser() -> _Parser:
    parser = _Parser(prog="sphere-distal", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON config file (or $SPHERE_DISTAL_CONFIG)")
    parser.add_argument("--seed", type=int, help="random seed override")
    for flag, dest in (
        ("--tol-unit-norm", "unit_norm_tol"),
        ("--tol-spectral", "spectral_tol"),
        ("--tol-rank", "rank_tol"),
        ("--tol-residual", "residual_tol"),
        ("--tol-bisection", "bisection_tol"),
        ("--tol-singular", "singular_tol"),
        ("--tol-classify", "classify_tol"),
    ):
        parser.add_argument(flag, dest=dest, type=float, default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    def add_matrix_arg(p):
        p.add_argument("matrix", nargs="?", help="matrix JSON file")
        p.add_argument("--rot", help="build a 2x2 rotation by this angle (radians)")

    p = sub.add_parser("classify", help="distality verdict for one matrix")
    add_matrix_arg(p)

    p = sub.add_parser("fixed-point", help="fixed/period-2 point of the affine map")
    add_matrix_arg(p)
    p.add_argument("--a", required=True, help="translation, comma separated")

    p = sub.add_parser("orbit", help="record an orbit as CSV (and optionally SVG)")
    add_matrix_arg(p)
    p.add_argument("--a", default=None, help="translation, comma separated (default 0)")
    p.add_argument("--x", default=None, help="start point (default first basis vector)")
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--csv", default=None, help="CSV path (default stdout)")
    p.add_argument("--svg", default=None, help="SVG path")
    p.add_argument("--proj-axis", type=int, default=3, help="dropped axis for d=3 SVG")

    p = sub.add_parser("semigroup", help="distality test for generated semigroup")
    p.add_argument("spec", help="semigroup spec JSON file")

    p = sub.add_parser("witness", help="choose a non-distality witness translation")
    add_matrix_arg(p)

    p = sub.add_parser("inverse-image", help="preimage of a point under the affine map")
    add_matrix_arg(p)
    p.add_argument("--a", required=True, help="translation, comma separated")
    p.add_argument("--y", required=True, help="target point, comma separated")

    return parser


def _dispatch_fixed_point(T, a, config):
    report = affine_is_homeomorphism(T, a, config)  # raises ZeroTranslation
    if report.regime is not Regime.HOMEOMORPHISM:
        raise InvalidTranslation(
            f"||T^-1 a|| = {report.pullback_norm:.6g}: map is not a homeomorphism"
        )
    nm = normalize_to_unimodular(T, config)
    es = real_schur_2x2(nm.unit, config)
    if isinstance(es.kind, ComplexPair):
        return find_fixed_point_complex(T, a, config)
    positive = (
        es.kind.eigenvalue > 0.0
        if isinstance(es.kind, JordanBlock)
        else es.kind.eig_major > 0.0
    )
    if positive:
        return find_fixed_point_real_positive(T, a, config)
    if float(np.max(np.abs(nm.unit + np.eye(2)))) <= config.classify_tol:
        scale = math.sqrt(abs(determinant(T)))
        return minus_id_period2_points(np.asarray(a, dtype=float) / scale, config)
    raise OutsideCoveredClasses(
        "both eigenvalues negative and T is not -Id: no construction for this a; "
        "try the witness command"
    )


def _run(args, config) -> tuple[int, object]:
    """Execute one subcommand; returns (exit_code, result payload)."""
    if args.command == "classify":
        T = _resolve_matrix(args)
        verdict = classify_projective_distality(T, config)
        return _VERDICT_EXIT[verdict.verdict], verdict_to_json(verdict)

    if args.command == "fixed-point":
        T = _resolve_matrix(args)
        a = _parse_vector(args.a)
        result = _dispatch_fixed_point(T, a, config)
        if isinstance(result, FixedPointResult):
            return EXIT_DISTAL, fixed_point_to_json(result)
        return EXIT_DISTAL, periodic_points_to_json(result)

    if args.command == "orbit":
        T = _resolve_matrix(args)
        d = T.shape[0]
        a = _parse_vector(args.a) if args.a else None
        if args.x is not None:
            x = _parse_vector(args.x)
        else:
            x = np.zeros(d)
            x[0] = 1.0
        m = AffineSphereMap.create(T, a, config)
        record = orbit(m, x, args.steps, config)
        to_stdout = args.csv is None
        if to_stdout:
            orbit_to_csv(record, sys.stdout)
        else:
            with open(args.csv, "w", encoding="utf-8") as fh:
                orbit_to_csv(record, fh)
        if args.svg:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(orbit_to_svg(record, proj_axis=args.proj_axis))
        if to_stdout:
            return EXIT_DISTAL, None  # stdout already holds the CSV payload
        payload = {
            "map": m.describe(),
            "steps": int(args.steps),
            "first": [float(v) for v in record.points[0]],
            "last": [float(v) for v in record.points[-1]],
            "csv": args.csv,
            "svg": args.svg,
        }
        return EXIT_DISTAL, payload

    if args.command == "semigroup":
        spec = load_semigroup_spec(args.spec)
        verdict = semigroup_distality_test(spec, config)
        return _VERDICT_EXIT[verdict.verdict], verdict_to_json(verdict)

    if args.command == "witness":
        T = _resolve_matrix(args)
        if T.shape[0] == 2:
            a, result = choose_nondistal_witness(T, config)
            body = (
                fixed_point_to_json(result)
                if isinstance(result, FixedPointResult)
                else periodic_points_to_json(result)
            )
            return EXIT_DISTAL, {"a": [float(v) for v in a], "result": body}
        a, pair = isometry_even_sphere_witness(T, config)
        return EXIT_DISTAL, {
            "a": [float(v) for v in a],
            "result": certificate_to_json(pair),
        }

    if args.command == "inverse-image":
        T = _resolve_matrix(args)
        a = _parse_vector(args.a)
        y = _parse_vector(args.y)
        m = AffineSphereMap.create(T, a, config)
        x = affine_inverse_image(m, y, config)
        forward = apply_affine(m, x, config)
        return EXIT_DISTAL, {
            "matrix": matrix_to_json(T),
            "point": [float(v) for v in x],
            "forward_residual": float(np.linalg.norm(forward - np.asarray(y, float))),
        }

    raise SpecParseError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config)
        config = _apply_overrides(config, args)
        code, payload = _run(args, config)
    except _CliUsage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SingularMatrix as exc:
        print(f"error: singular matrix: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (InvalidTranslation, ZeroTranslation, DegenerateMap) as exc:
        print(f"error: invalid translation: {exc}", file=sys.stderr)
        return EXIT_TRANSLATION
    except (
        HypothesisNotMet,
        OutsideCoveredClasses,
        NoPositiveRealEigenvalue,
        RealSpectrum,
        NotOrthogonal,
        DimensionUnsupported,
        DimensionMismatch,
    ) as exc:
        print(f"error: not covered: {exc}", file=sys.stderr)
        return EXIT_UNCOVERED
    except SphereDistalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    wall = time.perf_counter() - started
    if payload is not None:
        report = run_report(argv, config, payload, wall, __version__)
        print(dump_json(report))
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
