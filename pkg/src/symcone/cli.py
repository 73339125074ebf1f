"""``symcone`` command line: JSON requests in, JSON responses out.

Subcommands
-----------
run
    Reads ``{"module", "op", "params", "seed"}`` and writes
    ``{"ok", "result", "error"}``.
selftest
    Runs the seeded invariant suites and prints a report.
ops
    Lists every available ``module.op`` pair.

Exit codes: 0 success, 1 selftest failure, 2 schema error, 3 domain error,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import boundary as bd
from . import cone
from . import conformal as cf
from . import indices as ix
from . import jordan as jd
from . import lie
from . import selftest as st
from . import semigroups as sg
from . import serialize as ser
from .errors import DomainError, NumericalFailure
from .serialize import SchemaError

EXIT_OK, EXIT_SELFTEST, EXIT_SCHEMA, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3, 4


# ---------------------------------------------------------------------------
# parameter decoders


def _element(v):
    return ser.decode_element(v)


def _elements(v):
    if not isinstance(v, list):
        raise SchemaError("expected a list of elements")
    return [ser.decode_element(x) for x in v]


def _covering(v):
    return bd.CoveringPoint(ser.decode_element(ser._need(v, "sigma")), float(ser._need(v, "theta")))


def _matrix(v):
    return ser.decode_array(v, 2)


def _compression(v):
    return cone.CompressionElement(ser.decode_algebra(ser._need(v, "algebra")), _matrix(ser._need(v, "matrix")))


def _conformal(v):
    return cf.Conformal(ser.decode_algebra(ser._need(v, "algebra")), _matrix(ser._need(v, "matrix")))


def _lift(v):
    g = _conformal(v)
    if "theta0" in v:
        return cf.Lift(g, float(v["theta0"]))
    return cf.principal_lift(g)


def _structure_map(v):
    return bd.StructureMap(ser.decode_algebra(ser._need(v, "algebra")), _matrix(ser._need(v, "op")))


def _field(v):
    alg = ser.decode_algebra(ser._need(v, "algebra"))
    vec = lambda k: ser.decode_array(ser._need(v, k), 1).astype(complex)
    return lie.LieField(alg, vec("u"), _matrix(ser._need(v, "T")).astype(complex), vec("v"))


def _scalar_fn(v):
    """Named scalar function for the functional calculus."""
    if isinstance(v, str):
        name, arg = v, None
    else:
        name, arg = ser._need(v, "name"), v.get("p")
    table = {
        "sqrt": (np.sqrt, lambda t: t >= 0),
        "log": (np.log, lambda t: t > 0),
        "exp": (np.exp, None),
        "inv": (lambda t: 1 / t, lambda t: t != 0),
        "abs": (np.abs, None),
    }
    if name == "power":
        p = float(arg)
        return (lambda t: t ** p), (lambda t: t > 0)
    if name not in table:
        raise SchemaError(f"unknown scalar function {name!r}")
    return table[name]


DECODERS: dict[str, Callable] = {
    "element": _element,
    "elements": _elements,
    "algebra": ser.decode_algebra,
    "covering": _covering,
    "matrix": _matrix,
    "vector": lambda v: ser.decode_array(v, 1),
    "compression": _compression,
    "conformal": _conformal,
    "lift": _lift,
    "structure_map": _structure_map,
    "field": _field,
    "kind": ser.decode_kind,
    "semigroup": ser.decode_semigroup,
    "tube": ser.decode_tube,
    "float": float,
    "int": int,
    "str": str,
    "bool": bool,
    "scalar_fn": _scalar_fn,
}


@dataclass
class Op:
    fn: Callable
    params: dict
    optional: tuple = ()


def _funcalc(x, f):
    fn, dom = f
    return jd.funcalc(x, fn, dom)


def _make_algebra(kind, size):
    return jd.make_algebra(kind, size)


def _bushell(g, p, algebra, seed_rng):
    return cone.bushell_solve(g, p, algebra, rng=seed_rng)


def _pullback(kind, Z, p=None, F="one", at=None):
    if F == "one":
        fun = lambda g: 1.0
    elif F == "szego":
        if at is None:
            raise SchemaError("F='szego' needs the 'at' element")
        fun = lambda g: sg.szego_kernel_semigroup(g, at)
    else:
        raise SchemaError("F is 'one' or 'szego'")
    return sg.intertwiner_pullback(fun, kind, p)(Z)


def _cover_act(g, p):
    return g.act(p)


def _rotation(g, base=None, K=1024):
    return ix.rotation_number(g, base, K)


OPS: dict[tuple[str, str], Op] = {
    # jordan-core
    ("algebra", "make_algebra"): Op(_make_algebra, {"kind": "str", "size": "int"}),
    ("algebra", "product"): Op(jd.product, {"x": "element", "y": "element"}),
    ("algebra", "lmul"): Op(jd.lmul, {"x": "element"}),
    ("algebra", "quad_rep"): Op(jd.quad_rep, {"x": "element"}),
    ("algebra", "box"): Op(jd.box, {"x": "element", "y": "element"}),
    ("algebra", "spectral"): Op(jd.spectral, {"x": "element"}),
    ("algebra", "det_tr"): Op(jd.det_tr, {"x": "element"}),
    ("algebra", "inverse"): Op(jd.inverse, {"x": "element"}),
    ("algebra", "funcalc"): Op(_funcalc, {"x": "element", "f": "scalar_fn"}),
    ("algebra", "peirce"): Op(jd.peirce, {"c": "element"}),
    ("algebra", "cone_classify"): Op(jd.cone_classify, {"x": "element"}),
    ("algebra", "signature_orbit"): Op(jd.signature_orbit, {"x": "element"}),
    ("algebra", "epsilon"): Op(lambda algebra, k: jd.epsilon(algebra, k), {"algebra": "algebra", "k": "int"}),
    # cone-geometry
    ("cone", "riemann_metric"): Op(cone.riemann_metric, {"x": "element", "u": "element", "v": "element"}),
    ("cone", "compound_and_distance"): Op(cone.compound_and_distance, {"x": "element", "y": "element"}),
    ("cone", "riemann_distance"): Op(cone.riemann_distance, {"x": "element", "y": "element"}),
    ("cone", "hilbert_distance"): Op(cone.hilbert_distance, {"x": "element", "y": "element"}),
    ("cone", "hilbert_distance_extremal"): Op(cone.hilbert_distance_extremal, {"x": "element", "y": "element"}),
    ("cone", "thompson_distance"): Op(cone.thompson_distance, {"x": "element", "y": "element"}),
    ("cone", "bushell_solve"): Op(_bushell, {"g": "matrix", "p": "float", "algebra": "algebra"}),
    ("cone", "compression_apply"): Op(cone.compression_apply, {"gamma": "compression", "z": "element"}),
    ("cone", "compression_membership"): Op(cone.compression_membership, {"gamma": "compression"}),
    ("cone", "compression_factorize"): Op(cone.compression_factorize, {"gamma": "compression"}),
    ("cone", "contraction_check"): Op(cone.contraction_check,
                                      {"gamma": "compression", "x": "element", "y": "element"}),
    # boundary-geometry
    ("boundary", "boundary_from_angles"): Op(bd.boundary_from_angles, {"frame": "elements", "angles": "vector"}),
    ("boundary", "spectral_norm"): Op(bd.spectral_norm, {"z": "element"}),
    ("boundary", "disk_membership"): Op(bd.disk_membership, {"z": "element"}),
    ("boundary", "cayley_p"): Op(bd.cayley_p, {"z": "element"}),
    ("boundary", "cayley_c"): Op(bd.cayley_c, {"w": "element"}),
    ("boundary", "transversal"): Op(bd.transversal, {"z": "element", "w": "element"}),
    ("boundary", "principal_log"): Op(bd.principal_log, {"sigma": "element"}),
    ("boundary", "boundary_exp"): Op(bd.boundary_exp, {"u": "element"}),
    ("boundary", "character_chi"): Op(bd.character_chi, {"g": "structure_map"}),
    ("boundary", "conformal_chi"): Op(cf.character_chi, {"g": "conformal"}),
    ("boundary", "det_cocycle_check"): Op(cf.det_cocycle_check, {"g": "conformal", "sigma": "element"}),
    ("boundary", "cover_act"): Op(_cover_act, {"g": "lift", "p": "covering"}),
    ("boundary", "normalize_to_minus_e"): Op(bd.normalize_to_minus_e, {"tau": "element"}, ("branch",)),
    ("boundary", "kkt_bracket"): Op(lie.kkt_bracket, {"X1": "field", "X2": "field"}),
    ("boundary", "involutions"): Op(lie.involutions, {"X": "field"}),
    ("boundary", "cayley_cone_membership"): Op(lie.cayley_cone_membership, {"X": "field"}),
    # maslov-indices
    ("indices", "transversality_index"): Op(ix.transversality_index, {"sigma": "element", "tau": "element"}),
    ("indices", "transversality_index_orbit"): Op(ix.transversality_index_orbit,
                                                  {"sigma": "element", "tau": "element"}),
    ("indices", "souriau_index"): Op(ix.souriau_index, {"p": "covering", "q": "covering"}, ("branch",)),
    ("indices", "maslov_triple"): Op(ix.maslov_triple, {"s1": "element", "s2": "element", "s3": "element"}),
    ("indices", "arnold_index"): Op(ix.arnold_index, {"p": "covering", "q": "covering"}),
    ("indices", "inertia_index"): Op(ix.inertia_index, {"s1": "element", "s2": "element", "s3": "element"}),
    ("indices", "arnold_leray_index"): Op(ix.arnold_leray_index, {"p": "covering", "q": "covering"}),
    ("indices", "maslov_stratum"): Op(ix.maslov_stratum, {"sigma": "element", "sigma0": "element"}),
    ("indices", "rotation_number"): Op(_rotation, {"g": "lift"}, ("base", "K")),
    # contraction-semigroups
    ("semigroup", "semigroup_membership"): Op(sg.semigroup_membership, {"elem": "semigroup"}),
    ("semigroup", "cayley_C"): Op(sg.cayley_C, {"Z": "tube"}, ("with_branch",)),
    ("semigroup", "cayley_C_inverse"): Op(sg.cayley_C_inverse, {"elem": "semigroup"}),
    ("semigroup", "szego_kernel_tube"): Op(sg.szego_kernel_tube, {"Z": "tube", "W": "tube"}, ("lam",)),
    ("semigroup", "szego_kernel_semigroup"): Op(sg.szego_kernel_semigroup, {"g1": "semigroup", "g2": "semigroup"}),
    ("semigroup", "bergman_kernel"): Op(sg.bergman_kernel, {"g1": "semigroup", "g2": "semigroup"}),
    ("semigroup", "metaplectic_mul"): Op(sg.metaplectic_mul, {"a": "semigroup", "b": "semigroup"}),
    ("semigroup", "lift_principal"): Op(sg.lift_principal, {"elem": "semigroup"}),
    ("semigroup", "intertwiner_pullback"): Op(_pullback, {"kind": "kind", "Z": "tube"}, ("p", "F", "at")),
    ("semigroup", "weight_enumerate"): Op(sg.weight_enumerate, {"kind": "kind", "bound": "int"},
                                          ("parity", "bracket")),
}

OPTIONAL_TYPES = {"branch": "str", "base": "covering", "K": "int", "with_branch": "bool",
                  "lam": "float", "p": "float", "F": "str", "at": "semigroup",
                  "parity": "str", "bracket": "str"}


def dispatch(request: dict):
    """Run a decoded request; returns the encoded result."""
    if not isinstance(request, dict):
        raise SchemaError("request must be a JSON object")
    module, op = request.get("module"), request.get("op")
    if (module, op) not in OPS:
        raise SchemaError(f"unknown operation {module}.{op}")
    entry = OPS[(module, op)]
    params = request.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("params must be an object")
    extra = set(params) - set(entry.params) - set(entry.optional)
    if extra:
        raise SchemaError(f"unexpected parameters {sorted(extra)}")
    kwargs = {}
    for name, tag in entry.params.items():
        if name not in params:
            raise SchemaError(f"missing parameter {name!r}")
        kwargs[name] = _decode_param(tag, params[name])
    for name in entry.optional:
        if name in params:
            kwargs[name] = _decode_param(OPTIONAL_TYPES[name], params[name])
    if entry.fn is _bushell:
        kwargs["seed_rng"] = np.random.default_rng(request.get("seed", 0))
    return ser.encode(entry.fn(**kwargs))


def _decode_param(tag, value):
    try:
        return DECODERS[tag](value)
    except (SchemaError, DomainError, NumericalFailure):
        raise
    except (TypeError, KeyError, ValueError, AttributeError) as exc:
        raise SchemaError(f"bad {tag} parameter: {exc}") from None


def run_request(request) -> tuple[dict, int]:
    """Response object and exit code for a request."""
    try:
        result = dispatch(request)
        return {"ok": True, "result": result, "error": None}, EXIT_OK
    except SchemaError as exc:
        return _error("SchemaError", exc), EXIT_SCHEMA
    except DomainError as exc:
        return _error(type(exc).__name__, exc), EXIT_DOMAIN
    except NumericalFailure as exc:
        return _error(type(exc).__name__, exc), EXIT_NUMERIC
    except (TypeError, ValueError, KeyError) as exc:
        # malformed values that slipped past the decoders
        return _error("SchemaError", exc), EXIT_SCHEMA


def _error(name, exc):
    return {"ok": False, "result": None, "error": {"type": name, "message": str(exc)}}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=True)


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symcone", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute one JSON request")
    r.add_argument("--in", dest="inp", help="request file (default stdin)")
    r.add_argument("--out", help="response file (default stdout)")
    r.add_argument("--seed", type=int, help="overrides the request seed")
    s = sub.add_parser("selftest", help="run invariant suites")
    s.add_argument("suite", nargs="?", default="all", choices=st.SUITES + ("all",))
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--tol", type=float, help="override floating-point tolerances")
    s.add_argument("--out", help="write the JSON report here")
    s.add_argument("--inject-fault", choices=["sign-flip"], help="corrupt the build (harness check)")
    s.add_argument("--quiet", action="store_true")
    sub.add_parser("ops", help="list operations")
    return ap


def _write(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "ops":
        _write("\n".join(f"{m}.{o}" for m, o in sorted(OPS)), None)
        return EXIT_OK
    if args.command == "run":
        try:
            raw = open(args.inp).read() if args.inp else sys.stdin.read()
            request = json.loads(raw)
        except (OSError, json.JSONDecodeError) as exc:
            resp, code = _error("SchemaError", exc), EXIT_SCHEMA
        else:
            if args.seed is not None and isinstance(request, dict):
                request["seed"] = args.seed
            resp, code = run_request(request)
        _write(_dump(resp), args.out)
        return code
    # selftest
    restore = st.inject_sign_flip() if args.inject_fault == "sign-flip" else None
    try:
        results = st.run(args.suite, args.seed, args.tol)
    finally:
        if restore:
            restore()
    failed = [r for r in results if not r.passed]
    if not args.quiet:
        for r in results:
            tag = "PASS" if r.passed else "FAIL"
            line = f"{tag} {r.suite}.{r.name}: worst={r.worst_residual:.3e} tol={r.tolerance:.0e} n={r.samples}"
            if r.error:
                line += f" ({r.error})"
            print(line)
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if args.out:
        report = {"seed": args.seed, "suite": args.suite, "passed": not failed,
                  "checks": [{k: v for k, v in ser.encode(r).items() if k != "seconds"} for r in results]}
        _write(_dump(report), args.out)
    return EXIT_SELFTEST if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
