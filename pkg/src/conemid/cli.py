"""Command-line front door: analyze, verify, selftest, samples.

Problem files are JSON with an explicit algebra kind; reports are JSON
with every float at 17 significant digits so identical (input, seed,
version) triples reproduce byte-identical output.  Exit codes: 0
success, 1 internal invariant violation, 2 parse error, 3 validation
error, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__, ejalg, midspan, oracle, selftest, thompson
from .conegeom import (Backend, DegeneratePairError, JordanCone,
                       NotInteriorError, StandardCone)
from .jacobi import JacobiConvergenceError
from .midspan import InternalInvariantError

EXIT_SUCCESS = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_MISMATCH = 4

_SILENT_ASYM = 1e-12
_WARN_ASYM = 1e-8


class ParseError(Exception):
    """Malformed input: bad JSON, unknown kinds, non-numeric entries."""


class ValidationError(Exception):
    """Well-formed input that violates a precondition."""


# --- JSON emission ----------------------------------------------------

def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise InternalInvariantError("non-finite value reached the report")
    return format(x, ".17g")


def _is_scalar(v) -> bool:
    return v is None or isinstance(v, (bool, int, float, str, np.integer,
                                       np.floating))


def _dump(obj, indent: int) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_dump(v, indent + 1)}'
            for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        if all(_is_scalar(v) for v in obj):
            return "[" + ", ".join(_dump(v, 0) for v in obj) + "]"
        items = ",\n".join(f"{pad}  {_dump(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def render_report(payload: dict) -> str:
    return _dump(payload, 0) + "\n"


# --- parsing ----------------------------------------------------------

def _need(cond: bool, message: str, exc=ParseError):
    if not cond:
        raise exc(message)


def parse_algebra(node) -> Backend:
    _need(isinstance(node, dict), "algebra must be a JSON object")
    kind = node.get("kind")
    _need(isinstance(kind, str), "algebra.kind must be a string")
    try:
        if kind == "standard":
            return StandardCone(int(node["size"]))
        if kind == ejalg.KIND_SYM:
            return JordanCone(ejalg.sym_real(int(node["size"])))
        if kind == ejalg.KIND_HERM:
            return JordanCone(ejalg.herm_complex(int(node["size"])))
        if kind == ejalg.KIND_SPIN:
            return JordanCone(ejalg.spin_factor(int(node["size"])))
        if kind == ejalg.KIND_SUM:
            parts = node.get("summands")
            _need(isinstance(parts, list) and parts,
                  "direct-sum needs a non-empty summands list")
            descs = []
            for part in parts:
                sub = parse_algebra(part)
                _need(isinstance(sub, JordanCone),
                      "direct-sum summands must be algebra kinds")
                descs.append(sub.algebra)
            return JordanCone(ejalg.direct_sum(*descs))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"algebra spec is missing a field: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"bad algebra spec: {exc}") from exc
    raise ParseError(f"unknown algebra kind {kind!r}")


def _real_entry(v, what: str) -> float:
    _need(isinstance(v, (int, float)) and not isinstance(v, bool),
          f"{what} must be a number")
    return float(v)


def _complex_entry(v, what: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(float(v), 0.0)
    _need(isinstance(v, list) and len(v) == 2,
          f"{what} must be a number or an [re, im] pair")
    return complex(_real_entry(v[0], what), _real_entry(v[1], what))


def _check_square(node, m: int, what: str):
    _need(isinstance(node, list), f"{what} must be a matrix (list of rows)")
    if len(node) != m or any(not isinstance(r, list) or len(r) != m
                             for r in node):
        raise ValidationError(f"{what} must be a {m}x{m} matrix")


def _symmetrise(mat: np.ndarray, what: str) -> np.ndarray:
    adjoint = mat.conj().T if np.iscomplexobj(mat) else mat.T
    scale = max(1.0, float(np.max(np.abs(mat))) if mat.size else 1.0)
    asym = float(np.max(np.abs(mat - adjoint)))
    if asym > _WARN_ASYM * scale:
        raise ParseError(
            f"{what} is not symmetric within tolerance "
            f"(asymmetry {asym:.3g} over scale {scale:.3g})")
    if asym > _SILENT_ASYM * scale:
        print(f"warning: symmetrising {what} (asymmetry {asym:.3g})",
              file=sys.stderr)
    return 0.5 * (mat + adjoint)


def _parse_eja_element(node, desc: ejalg.AlgebraDescriptor,
                       what: str) -> ejalg.Element:
    if desc.kind == ejalg.KIND_SYM:
        _check_square(node, desc.size, what)
        mat = np.array([[_real_entry(v, what) for v in row] for row in node])
        return ejalg.from_matrix(desc, _symmetrise(mat, what))
    if desc.kind == ejalg.KIND_HERM:
        _check_square(node, desc.size, what)
        mat = np.array([[_complex_entry(v, what) for v in row]
                        for row in node], dtype=complex)
        return ejalg.from_matrix(desc, _symmetrise(mat, what))
    if desc.kind == ejalg.KIND_SPIN:
        _need(isinstance(node, list), f"{what} must be a coordinate list")
        if len(node) != desc.size:
            raise ValidationError(
                f"{what} must have {desc.size} spin coordinates")
        values = [_real_entry(v, what) for v in node]
        return ejalg.from_spin_parts(desc, values[0], np.array(values[1:]))
    _need(isinstance(node, list), f"{what} must be a list of blocks")
    if len(node) != len(desc.summands):
        raise ValidationError(
            f"{what} must have one block per summand "
            f"({len(desc.summands)} expected)")
    blocks = [_parse_eja_element(b, part, f"{what} block {i}")
              for i, (b, part) in enumerate(zip(node, desc.summands))]
    return ejalg.join_blocks(desc, blocks)


def parse_element(node, backend: Backend, what: str):
    if isinstance(backend, StandardCone):
        _need(isinstance(node, list), f"{what} must be a coordinate list")
        if len(node) != backend.n:
            raise ValidationError(f"{what} must have {backend.n} coordinates")
        return np.array([_real_entry(v, what) for v in node])
    return _parse_eja_element(node, backend.algebra, what)


def encode_element(z, backend: Backend):
    if isinstance(backend, StandardCone):
        return [float(v) for v in np.asarray(z, dtype=float)]
    return _encode_eja(z, backend.algebra)


def _encode_eja(z: ejalg.Element, desc: ejalg.AlgebraDescriptor):
    if desc.kind == ejalg.KIND_SYM:
        return [[float(v) for v in row] for row in ejalg.to_matrix(z)]
    if desc.kind == ejalg.KIND_HERM:
        return [[[float(v.real), float(v.imag)] for v in row]
                for row in ejalg.to_matrix(z)]
    if desc.kind == ejalg.KIND_SPIN:
        t, w = ejalg.spin_parts(z)
        return [float(t)] + [float(v) for v in w]
    return [_encode_eja(block, part)
            for block, part in zip(ejalg.split_blocks(z), desc.summands)]


_OPTION_KEYS = {"seed", "samples", "radius", "tol", "tie_tol"}


@dataclasses.dataclass
class Resolved:
    seed: int = 0
    samples: int = 500
    radius: float = 1e-2
    tol: float | None = None
    tie_tol: float = midspan.TIE_TOL


@dataclasses.dataclass
class Problem:
    backend: Backend
    x: object
    y: object
    options: Resolved


def _resolve_options(file_options: dict, args) -> Resolved:
    res = Resolved()
    env_seed = os.environ.get("CONEMID_SEED")
    if env_seed is not None:
        try:
            res.seed = int(env_seed)
        except ValueError as exc:
            raise ParseError(f"CONEMID_SEED is not an integer: {env_seed!r}") \
                from exc
    for key, value in file_options.items():
        if key not in _OPTION_KEYS:
            raise ParseError(f"unknown option {key!r}")
        if key == "seed":
            _need(isinstance(value, int) and not isinstance(value, bool),
                  "seed must be an integer")
            res.seed = value
        elif key == "samples":
            _need(isinstance(value, int) and not isinstance(value, bool),
                  "samples must be an integer")
            res.samples = value
        else:
            setattr(res, key, _real_entry(value, key))
    for key in ("seed", "samples", "radius", "tol"):
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(res, key, flag)
    if getattr(args, "tie_tol", None) is not None:
        res.tie_tol = args.tie_tol
    if res.samples < 1:
        raise ValidationError("samples must be at least 1")
    if res.radius <= 0:
        raise ValidationError("radius must be positive")
    if res.tol is not None and res.tol <= 0:
        raise ValidationError("tol must be positive")
    if not 0 < res.tie_tol < 0.1:
        raise ValidationError("tie-tol must be in (0, 0.1)")
    return res


def load_problem(path: str, args) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    _need(isinstance(doc, dict), "problem file must be a JSON object")
    for key in ("algebra", "x", "y"):
        _need(key in doc, f"problem file is missing {key!r}")
    backend = parse_algebra(doc["algebra"])
    x = parse_element(doc["x"], backend, "x")
    y = parse_element(doc["y"], backend, "y")
    file_options = doc.get("options", {})
    _need(isinstance(file_options, dict), "options must be an object")
    options = _resolve_options(file_options, args)
    return Problem(backend=backend, x=x, y=y, options=options)


# --- report assembly --------------------------------------------------

def _attainment_payload(att, backend: Backend):
    if att is None:
        return None
    payload = {
        "eigenvalues": [float(v) for v in att.eigenvalues],
        "multiplicities": list(att.multiplicities),
        "attaining": list(att.attaining),
        "k": att.k,
        "theta": float(att.theta),
    }
    if att.c is not None:
        payload["c"] = encode_element(att.c, backend)
    if att.attaining_coords is not None:
        payload["attaining_coords"] = sorted(att.attaining_coords)
    return payload


def _config_payload(res: Resolved, d: float) -> dict:
    tol = thompson.midpoint_tolerance(d) if res.tol is None else res.tol
    return {
        "seed": res.seed,
        "samples": res.samples,
        "radius": res.radius,
        "tol": tol,
        "tie_tol": res.tie_tol,
    }


def analyze_payload(problem: Problem, backend_check: bool = False):
    backend, x, y = problem.backend, problem.x, problem.y
    d = thompson.distance(x, y, backend)
    report = midspan.midpoint_span(x, y, backend, problem.options.tie_tol)
    if backend_check and report.formula_dimension is not None \
            and report.formula_dimension != report.dimension:
        raise InternalInvariantError(
            f"span dimension {report.dimension} disagrees with closed form "
            f"{report.formula_dimension}")
    is_eja = isinstance(backend, JordanCone)
    payload = {
        "version": __version__,
        "backend": backend.label(),
        "distance": d,
        "delta2": thompson.delta2(x, y, backend) if is_eja else None,
        "geometric_mean": encode_element(
            thompson.geometric_mean(x, y, backend), backend),
        "canonical_midpoint": encode_element(report.base_point, backend),
        "attainment": _attainment_payload(report.attainment, backend),
        "near_tie": bool(report.attainment.near_tie
                         if report.attainment else False),
        "span_basis": [encode_element(b, backend) for b in report.basis],
        "dimension": report.dimension,
        "formula_dimension": report.formula_dimension,
        "verification": None,
        "config": _config_payload(problem.options, d),
    }
    return payload, report


def _corrupt_report(report, backend: Backend):
    """Damage the prediction so the oracles must flag it (test plumbing)."""
    if report.basis:
        comp = oracle._complement_basis(report, backend)
        if comp.shape[1] == 0:
            return report
        g0 = report.basis[0]
        if isinstance(backend, StandardCone):
            bad = (g0 + comp[:, 0]) / math.sqrt(2.0)
        else:
            bad = ejalg.Element(
                backend.algebra,
                (np.asarray(g0.coords) + comp[:, 0]) / math.sqrt(2.0))
        basis = (bad,) + tuple(report.basis[1:])
        return dataclasses.replace(report, basis=basis)
    if isinstance(backend, StandardCone):
        shifted = np.asarray(report.base_point, dtype=float).copy()
        shifted[0] *= 1.05
    else:
        coords = np.asarray(report.base_point.coords).copy()
        coords[0] += 0.05 * max(1.0, float(np.max(np.abs(coords))))
        shifted = ejalg.Element(backend.algebra, coords)
    return dataclasses.replace(report, base_point=shifted)


def _verification_payload(vr: oracle.VerificationReport) -> dict:
    return {
        "ok": vr.ok,
        "predicted_dimension": vr.predicted_dimension,
        "estimated_dimension": vr.estimated_dimension,
        "accepted_count": vr.accepted_count,
        "sample_conclusive": vr.sample_conclusive,
        "positive": {
            "ok": vr.positive.ok,
            "base_ok": vr.positive.base_ok,
            "epsilon_start": vr.positive.epsilon_start,
            "directions": len(vr.positive.checks),
            "failed": [c.index for c in vr.positive.checks if not c.passed],
        },
        "negative": {
            "ok": vr.negative.ok,
            "epsilon": vr.negative.epsilon,
            "directions": len(vr.negative.checks),
            "failed": [c.index for c in vr.negative.checks if not c.passed],
        },
        "tolerances": dict(vr.tolerances),
    }


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ParseError(f"cannot write {path}: {exc}") from exc


# --- subcommands ------------------------------------------------------

def run_analyze(args) -> int:
    problem = load_problem(args.input, args)
    payload, _ = analyze_payload(problem, backend_check=args.backend_check)
    _write_output(render_report(payload), args.output)
    return EXIT_SUCCESS


def run_verify(args) -> int:
    problem = load_problem(args.input, args)
    payload, report = analyze_payload(problem,
                                      backend_check=args.backend_check)
    if args.inject_fault:
        report = _corrupt_report(report, problem.backend)
    opts = problem.options
    vr = oracle.run_verification(
        problem.x, problem.y, problem.backend,
        n_samples=opts.samples, radius=opts.radius, seed=opts.seed,
        tol=opts.tol, tie_tol=opts.tie_tol, report=report)
    payload["verification"] = _verification_payload(vr)
    _write_output(render_report(payload), args.output)
    return EXIT_SUCCESS if vr.ok else EXIT_MISMATCH


def _parse_backend_filter(text: str | None):
    if text is None:
        return None
    name, sep, size = text.partition(":")
    _need(bool(sep), "backend filter must look like kind:size")
    try:
        m = int(size)
    except ValueError as exc:
        raise ParseError(f"bad backend size {size!r}") from exc
    try:
        if name == ejalg.KIND_SYM or name == "sym":
            return ejalg.sym_real(m)
        if name == ejalg.KIND_HERM or name == "herm":
            return ejalg.herm_complex(m)
        if name == ejalg.KIND_SPIN:
            return ejalg.spin_factor(m)
    except ValueError as exc:
        raise ParseError(f"bad backend filter: {exc}") from exc
    raise ParseError(f"unknown backend family {name!r}")


def run_selftest_cmd(args) -> int:
    seed = args.seed
    if seed is None:
        env_seed = os.environ.get("CONEMID_SEED")
        try:
            seed = int(env_seed) if env_seed is not None else 0
        except ValueError as exc:
            raise ParseError(
                f"CONEMID_SEED is not an integer: {env_seed!r}") from exc
    backend = _parse_backend_filter(args.backend)
    try:
        results = selftest.run_selftest(seed=seed, cases=args.pairs,
                                        suites=tuple(args.suite) or None
                                        if args.suite else None,
                                        backend=backend)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    print(selftest.format_results(results))
    return EXIT_SUCCESS if all(r.ok for r in results) else EXIT_INTERNAL


def emit_samples(args) -> int:
    problem = load_problem(args.input, args)
    opts = problem.options
    report = midspan.midpoint_span(problem.x, problem.y, problem.backend,
                                   opts.tie_tol)
    detail = oracle.sample_detail(
        problem.x, problem.y, problem.backend, opts.samples,
        radius=opts.radius, seed=opts.seed, tol=opts.tol, report=report)
    lines = ["t1,t2,accepted"]
    for row, flag in zip(detail.coefficients, detail.flags):
        t1 = float(row[0]) if row.size >= 1 else 0.0
        t2 = float(row[1]) if row.size >= 2 else 0.0
        lines.append(f"{_format_float(t1)},{_format_float(t2)},{int(flag)}")
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_SUCCESS


# --- argument plumbing ------------------------------------------------

def _add_common_flags(sub):
    sub.add_argument("--tol", type=float, default=None,
                     help="midpoint acceptance tolerance (default: metric-scaled)")
    sub.add_argument("--tie-tol", dest="tie_tol", type=float, default=None,
                     help="relative attainment tie width (default 1e-8)")
    sub.add_argument("--seed", type=int, default=None,
                     help="RNG seed (fallback: CONEMID_SEED, then 0)")
    sub.add_argument("--samples", type=int, default=None,
                     help="sample count for the rejection sampler")
    sub.add_argument("--radius", type=float, default=None,
                     help="proposal radius for the rejection sampler")
    sub.add_argument("--backend-check", action="store_true",
                     help="fail (exit 1) if Peirce and closed-form dimensions differ")
    sub.add_argument("--inject-fault", action="store_true",
                     help="corrupt the prediction before verification (test plumbing)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conemid",
        description="Thompson-metric midpoint spans on symmetric cones")
    parser.add_argument("--version", action="version",
                        version=f"conemid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="full midpoint-span report for one pair")
    pa.add_argument("input", help="problem file (JSON)")
    pa.add_argument("-o", "--output", default=None, help="report path (default stdout)")
    _add_common_flags(pa)
    pa.set_defaults(func=run_analyze)

    pv = sub.add_parser("verify", help="run the independent oracles against the prediction")
    pv.add_argument("input", help="problem file (JSON)")
    pv.add_argument("-o", "--output", default=None, help="report path (default stdout)")
    _add_common_flags(pv)
    pv.set_defaults(func=run_verify)

    ps = sub.add_parser("selftest", help="seeded property suites over random backends")
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--pairs", type=int, default=1000,
                    help="cases per full-weight suite (default 1000)")
    ps.add_argument("--backend", default=None,
                    help="pin suites to one backend, e.g. spin:5")
    ps.add_argument("--suite", action="append", default=None,
                    help="run only the named suite (repeatable)")
    ps.set_defaults(func=run_selftest_cmd)

    pm = sub.add_parser("samples", help="CSV of sampler proposals over the span")
    pm.add_argument("input", help="problem file (JSON)")
    pm.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    _add_common_flags(pm)
    pm.set_defaults(func=emit_samples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, NotInteriorError, DegeneratePairError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (InternalInvariantError, JacobiConvergenceError,
            oracle.EpsilonFloorError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
