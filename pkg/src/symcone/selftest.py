"""Seeded invariant suites used by ``symcone selftest``.

Every check returns the worst residual over its samples.  Integer
identities report the number of mismatches, so their tolerance is 0.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import boundary as bd
from . import cone
from . import conformal as cf
from . import indices as ix
from . import jordan as jd
from . import lie
from . import sampling as sp
from . import semigroups as sg

SUITES = ("algebra", "cone", "boundary", "indices", "semigroup")


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    worst_residual: float
    tolerance: float
    samples: int
    seconds: float
    error: str | None = None


_REGISTRY: dict[str, list] = {s: [] for s in SUITES}


def _check(suite: str, tol: float):
    def deco(fn: Callable):
        _REGISTRY[suite].append((fn.__name__.lstrip("_"), fn, tol))
        return fn
    return deco


def _algebras():
    return [jd.make_algebra("sym_real", 3), jd.make_algebra("herm_complex", 3),
            jd.make_algebra("spin", 5)]


def _rel(a: float, *scales: float) -> float:
    return a / max(1.0, *scales)


# ---------------------------------------------------------------------------
# algebra


@_check("algebra", 1e-9)
def _jordan_identity(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(50):
            x, y = sp.random_element(alg, rng), sp.random_element(alg, rng)
            x2 = jd.square(x)
            lhs = jd.product(x2, jd.product(x, y))
            rhs = jd.product(x, jd.product(x2, y))
            worst = max(worst, _rel((lhs - rhs).norm(), x.norm() ** 3 * y.norm()))
            n += 1
    return worst, n


@_check("algebra", 1e-9)
def _form_associativity(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(50):
            x, y, z = (sp.random_element(alg, rng) for _ in range(3))
            d = jd.inner(jd.product(x, y), z) - jd.inner(x, jd.product(y, z))
            worst = max(worst, _rel(abs(d), x.norm() * y.norm() * z.norm()))
            n += 1
    return worst, n


@_check("algebra", 1e-9)
def _quadratic_representation(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(30):
            x = sp.random_element(alg, rng)
            d = jd.apply_op(jd.quad_rep(x), alg.unit()) - jd.square(x)
            worst = max(worst, _rel(d.norm(), x.norm() ** 2))
            n += 1
    return worst, n


@_check("algebra", 1e-9)
def _spectral_reconstruction(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(30):
            x = sp.random_element(alg, rng)
            res = jd.spectral(x).residuals(x)
            worst = max(worst, max(res.values()) / max(1.0, x.norm()))
            n += 1
    return worst, n


@_check("algebra", 0)
def _peirce_dimensions(rng):
    bad, n = 0, 0
    for r in range(2, 6):
        alg = jd.make_algebra("sym_real", r)
        for p in range(r + 1):
            q = r - p
            c = jd.Element(alg, np.diag([1.0] * p + [0.0] * q))
            bad += jd.peirce(c).dims() != (p * (p + 1) // 2, p * q, q * (q + 1) // 2)
            n += 1
    return bad, n


# ---------------------------------------------------------------------------
# cone


@_check("cone", 1e-9)
def _distance_symmetry_and_invariance(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(20):
            x, y = sp.random_cone_point(alg, rng), sp.random_cone_point(alg, rng)
            g = sp.random_cone_automorphism(alg, rng)
            d = cone.riemann_distance(x, y)
            d2 = cone.riemann_distance(y, x)
            d3 = cone.riemann_distance(jd.apply_op(g, x), jd.apply_op(g, y))
            worst = max(worst, _rel(abs(d - d2), d), _rel(abs(d - d3), d))
            n += 1
    return worst, n


@_check("cone", 1e-10)
def _distance_example(rng):
    alg = jd.make_algebra("sym_real", 2)
    x = jd.Element(alg, np.diag([np.e ** 2, np.e ** -1]))
    return abs(cone.riemann_distance(x, alg.unit()) - np.sqrt(5)), 1


@_check("cone", 1e-9)
def _hilbert_formulas_and_triangle(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(30):
            x, y, z = (sp.random_cone_point(alg, rng) for _ in range(3))
            h = cone.hilbert_distance(x, y)
            worst = max(worst, _rel(abs(h - cone.hilbert_distance_extremal(x, y)), h))
            slack = cone.hilbert_distance(x, z) + cone.hilbert_distance(z, y) - h
            worst = max(worst, -slack)
            n += 1
    return worst, n


@_check("cone", 1e-8)
def _bushell_residual(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for p in (2.0, 3.0, -2.0):
            g = sp.random_cone_automorphism(alg, rng)
            a = cone.bushell_solve(g, p, alg)
            ap = jd.power(a, p)
            worst = max(worst, (jd.apply_op(g, a) - ap).norm() / ap.norm())
            n += 1
    return worst, n


@_check("cone", 0)
def _contraction_theorem(rng):
    bad, n = 0, 0
    for alg in (jd.make_algebra("sym_real", 3), jd.make_algebra("herm_complex", 2)):
        for which, need in (("S", "weak"), ("S1", "strict"), ("S2", "strict"), ("S1S2", "strict")):
            for _ in range(5):
                gam = sp.random_compression(alg, rng, which)
                x, y = sp.random_cone_point(alg, rng), sp.random_cone_point(alg, rng)
                rep = cone.contraction_check(gam, x, y)
                bad += not getattr(rep, need)
                if which == "S1S2":
                    bad += not rep.ratio < 1
                n += 1
    return bad, n


# ---------------------------------------------------------------------------
# boundary


@_check("boundary", 1e-9)
def _cayley_roundtrip(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(20):
            z = sp.random_element(alg, rng, is_complex=True, scale=0.3)
            if not bd.disk_membership(z):
                continue
            back = bd.cayley_c(bd.cayley_p(z))
            worst = max(worst, (back - z).norm())
            n += 1
    return worst, n


@_check("boundary", 1e-9)
def _exp_log_roundtrip(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        for _ in range(20):
            s = bd.random_boundary_point(alg, rng)
            u = (bd.principal_log(s) * -1j).real_part()
            worst = max(worst, (bd.boundary_exp(u) - s).norm())
            n += 1
    return worst, n


@_check("boundary", 1e-8)
def _normalizer(rng):
    worst, n = 0.0, 0
    for alg in _algebras():
        minus_e = -alg.unit().as_complex()
        for _ in range(20):
            t = bd.random_boundary_point(alg, rng)
            for branch in ("principal", "alternate"):
                u = bd.normalize_to_minus_e(t, branch)
                worst = max(worst, (u.apply(t) - minus_e).norm())
                worst = max(worst, 0.0 if u.is_unitary() else 1.0)
                n += 1
    return worst, n


@_check("boundary", 1e-8)
def _det_cocycle(rng):
    worst, n = 0.0, 0
    for alg in (jd.make_algebra("sym_real", 2), jd.make_algebra("herm_complex", 2)):
        for _ in range(10):
            g = cf.random_conformal(alg, rng)
            s = bd.random_boundary_point(alg, rng)
            worst = max(worst, 0.0 if cf.det_cocycle_check(g, s) else 1.0)
            n += 1
    return worst, n


@_check("boundary", 1e-9)
def _kkt_jacobi(rng):
    worst, n = 0.0, 0
    for alg in (jd.make_algebra("sym_real", 2), jd.make_algebra("spin", 4)):
        def field():
            u, v = (sp.random_element(alg, rng, is_complex=True) for _ in range(2))
            a, x, y = (sp.random_element(alg, rng) for _ in range(3))
            return lie.LieField.from_elements(u, lie.structure_element(a, [(x, y)]), v)

        for _ in range(5):
            X, Y, Z = field(), field(), field()
            br = lie.kkt_bracket
            s = br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))
            worst = max(worst, _rel(s.norm(), X.norm() * Y.norm() * Z.norm()))
            n += 1
    return worst, n


# ---------------------------------------------------------------------------
# indices


def _index_algebras():
    return [jd.make_algebra("sym_real", 2), jd.make_algebra("sym_real", 3),
            jd.make_algebra("herm_complex", 2), jd.make_algebra("spin", 4)]


@_check("indices", 0)
def _transversality_normal_forms(rng):
    bad, n = 0, 0
    for alg in _index_algebras():
        e = alg.unit().as_complex()
        for k in range(alg.r + 1):
            ek = jd.epsilon(alg, k).as_complex()
            a = ix.transversality_index(e, ek).value
            b = ix.transversality_index_orbit(e, ek).value
            bad += (a != k) + (b != k)
            n += 1
    return bad, n


@_check("indices", 0)
def _maslov_normal_forms(rng):
    bad, n = 0, 0
    for alg in _index_algebras():
        for k in range(alg.r + 1):
            bad += ix.maslov_triple(*ix.maslov_normal_form(alg, k)).value != 2 * k - alg.r
            n += 1
    return bad, n


@_check("indices", 0)
def _maslov_skew_and_cocycle(rng):
    bad, n = 0, 0
    for alg in _index_algebras()[:3]:
        for _ in range(8):
            s = sp.random_boundary_tuple(alg, rng, 4)
            bad += ix.skew_symmetry_defect(*s[:3]) != 0
            bad += ix.maslov_cocycle(*s) != 0
            n += 1
    return bad, n


@_check("indices", 1e-6)
def _souriau_integrality(rng):
    worst, n = 0.0, 0
    for alg in _index_algebras():
        for _ in range(20):
            s, t = sp.random_boundary_tuple(alg, rng, 2)
            p, q = bd.lift(s, int(rng.integers(-3, 4))), bd.lift(t, int(rng.integers(-3, 4)))
            worst = max(worst, ix.souriau_index(p, q).residual)
            n += 1
    return worst, n


@_check("indices", 0)
def _leray_reproduces_triple(rng):
    bad, n = 0, 0
    for alg in _index_algebras():
        for _ in range(8):
            s = sp.random_boundary_tuple(alg, rng, 3)
            lifts = [int(v) for v in rng.integers(-3, 4, size=3)]
            p = [bd.lift(x, k) for x, k in zip(s, lifts)]
            bad += ix.leray_sum(*p).value != ix.maslov_triple(*s).value
            n += 1
    return bad, n


@_check("indices", 0)
def _coordinate_formulas(rng):
    bad, n = 0, 0
    for alg in _index_algebras():
        r = alg.r
        frame = jd.standard_frame(alg)
        base = bd.CoveringPoint(-alg.unit().as_complex(), -np.pi)
        for l in range(r + 1):
            for k in (-1, 0, 2):
                phis = rng.uniform(-np.pi + 0.1, np.pi - 0.1, r - l)
                sig = bd.boundary_from_angles(frame, [np.pi] * l + list(phis))
                q = bd.CoveringPoint(sig, (-l * np.pi + phis.sum() + 2 * k * np.pi) / r)
                bad += ix.souriau_index(base, q).value != 2 * k + r - l
                bad += ix.arnold_index(base, q).value != k - l
                n += 1
    return bad, n


@_check("indices", 0)
def _inertia_cocycle_and_primitive(rng):
    bad, n = 0, 0
    for alg in _index_algebras()[:3]:
        for _ in range(6):
            s = sp.random_boundary_tuple(alg, rng, 4)
            bad += ix.inertia_cocycle(*s) != 0
            p = [bd.lift(x, int(rng.integers(-2, 3))) for x in s[:3]]
            bad += ix.arnold_leray_coboundary_defect(*p) != 0
            n += 1
    return bad, n


@_check("indices", 1.0)
def _rotation_numbers(rng):
    """Residuals are measured in units of the error bound ``2 pi r / K``."""
    worst, n = 0.0, 0
    K = 1024
    for alg in (jd.make_algebra("sym_real", 2), jd.make_algebra("herm_complex", 2)):
        worst = max(worst, abs(ix.rotation_number(cf.identity_lift(alg), K=K).tau))
        v = jd.exp(sp.random_element(alg, rng))
        est = ix.rotation_number(cf.principal_lift(cf.tube_translation(v)), K=K)
        worst = max(worst, ix.circle_distance(est.rho, 0.0) / (alg.r / K))
        for _ in range(2):
            u = cf.random_unitary(alg, rng)
            est = ix.rotation_number(cf.principal_lift(u), bd.lift(bd.random_boundary_point(alg, rng)), K=K)
            d = abs(np.exp(2j * np.pi * est.rho) - cf.character_chi(u))
            worst = max(worst, d / (2 * np.pi * alg.r / K))
        n += 4
    return worst, n


# ---------------------------------------------------------------------------
# semigroup


def _kinds():
    return [sg.sp(1), sg.sp(2), sg.so_star(2), sg.so_star(3), sg.upq(1, 1), sg.upq(2, 1)]


@_check("semigroup", 1e-9)
def _cayley_C_roundtrip(rng):
    worst, n = 0.0, 0
    for kind in _kinds():
        for _ in range(20):
            Z = sg.random_tube_point(kind, rng)
            g = sg.cayley_C(Z)
            worst = max(worst, np.abs(sg.cayley_C_inverse(g).Z - Z.Z).max() / max(1.0, np.abs(Z.Z).max()))
            worst = max(worst, 0.0 if g.grade is sg.Grade.STRICT else 1.0)
            n += 1
    return worst, n


@_check("semigroup", 0)
def _strict_closure(rng):
    bad, n = 0, 0
    for kind in _kinds():
        for _ in range(10):
            a, b = (sg.cayley_C(sg.random_tube_point(kind, rng)) for _ in range(2))
            bad += (a @ b).grade is not sg.Grade.STRICT
            n += 1
    return bad, n


def _gram_defect(G: np.ndarray) -> float:
    G = (G + G.conj().T) / 2
    return max(0.0, -np.linalg.eigvalsh(G).min() / np.trace(G).real)


@_check("semigroup", 1e-8)
def _kernel_gram_psd(rng):
    worst, n = 0.0, 0
    for kind in _kinds():
        els = [sg.cayley_C(sg.random_tube_point(kind, rng), with_branch=True) for _ in range(6)]
        G = np.array([[sg.szego_kernel_semigroup(a, b) for b in els] for a in els])
        worst = max(worst, _gram_defect(G))
        Zs = [sg.random_tube_point(kind, rng) for _ in range(6)]
        G = np.array([[sg.szego_kernel_tube(a, b) for b in Zs] for a in Zs])
        worst = max(worst, _gram_defect(G))
        n += 2
    return worst, n


@_check("semigroup", 1e-9)
def _bergman_is_odd_kernel_squared(rng):
    worst, n = 0.0, 0
    for kind in (sg.sp(1), sg.sp(2)):
        for _ in range(10):
            a, b = (sg.cayley_C(sg.random_tube_point(kind, rng), with_branch=True) for _ in range(2))
            kb = sg.bergman_kernel(a, b)
            worst = max(worst, abs(kb - sg.szego_kernel_semigroup(a, b) ** 2) / abs(kb))
            n += 1
    return worst, n


@_check("semigroup", 1e-8)
def _metaplectic_branch_consistency(rng):
    worst, n = 0.0, 0
    for kind in _kinds():
        els = [sg.cayley_C(sg.random_tube_point(kind, rng), with_branch=True) for _ in range(10)]
        prod = els[0]
        for e in els[1:]:
            prod = sg.metaplectic_mul(prod, e)
            worst = max(worst, sg.branch_defect(prod))
        a, b, c = els[:3]
        x = sg.metaplectic_mul(sg.metaplectic_mul(a, b), c)
        y = sg.metaplectic_mul(a, sg.metaplectic_mul(b, c))
        worst = max(worst, abs(x.w - y.w) / abs(x.w))
        n += 10
    return worst, n


@_check("semigroup", 0)
def _weights(rng):
    got = [w.lam for w in sg.weight_enumerate(sg.sp(1), 3, "odd")]
    bad = got != [(-1.5,), (-2.5,)]
    small = set(sg.weight_enumerate(sg.upq(2, 1), 2))
    large = set(sg.weight_enumerate(sg.upq(2, 1), 3))
    bad += not small <= large
    return int(bad), 2


# ---------------------------------------------------------------------------
# runner


def run_suite(suite: str, seed: int = 0, tol: float | None = None) -> list[CheckResult]:
    """Run one suite.  ``tol`` overrides every floating-point tolerance."""
    out = []
    for i, (name, fn, default_tol) in enumerate(_REGISTRY[suite]):
        rng = np.random.default_rng([seed, SUITES.index(suite), i])
        t0 = time.perf_counter()
        limit = default_tol if (tol is None or default_tol == 0) else tol
        try:
            worst, n = fn(rng)
            worst = float(worst)
            passed = bool(worst <= limit)
            err = None
        except Exception as exc:  # a raised error is a failed check
            worst, n, passed, err = float("inf"), 0, False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(suite, name, passed, worst, float(limit), int(n),
                               time.perf_counter() - t0, err))
    return out


def run(suites="all", seed: int = 0, tol: float | None = None) -> list[CheckResult]:
    names = SUITES if suites == "all" else (suites,) if isinstance(suites, str) else tuple(suites)
    results = []
    for s in names:
        if s not in _REGISTRY:
            raise KeyError(s)
        results.extend(run_suite(s, seed, tol))
    return results


def inject_sign_flip():
    """Corrupt the Jordan product by a sign; returns a function undoing it."""
    original = jd._prod_data

    def flipped(kind, a, b):
        return -original(kind, a, b)

    jd._prod_data = flipped

    def restore():
        jd._prod_data = original

    return restore
