import numpy as np
import pytest
import scipy.linalg as sla

from symcone import cone
from symcone import jordan as jd
from symcone import sampling as sp
from symcone.cone import Membership
from symcone.errors import BadExponent, NotFactorizable, NotInSemigroup, NotInterior


def E(A, m):
    return jd.Element(A, np.asarray(m, dtype=float))


def oracle_relative_eigs(x, y):
    # generalized Hermitian eigenproblem x v = lam y v
    return np.sort(sla.eigh(x.data, y.data, eigvals_only=True))[::-1]


def test_metric_examples(rng):
    A = jd.make_algebra("sym_real", 2)
    u = sp.random_element(A, rng)
    assert np.isclose(cone.riemann_metric(A.unit(), u, u), u.norm() ** 2)
    x = E(A, 2 * np.eye(2))
    u = E(A, np.eye(2))
    # oracle: tr(x^-1 u x^-1 u)
    xi = np.linalg.inv(x.data)
    assert np.isclose(cone.riemann_metric(x, u, u), np.trace(xi @ u.data @ xi @ u.data))
    with pytest.raises(NotInterior):
        cone.riemann_metric(-A.unit(), u, u)


def test_metric_invariance(rng):
    A = jd.make_algebra("herm_complex", 3)
    x = sp.random_cone_point(A, rng)
    u, v = sp.random_element(A, rng), sp.random_element(A, rng)
    a = sp.random_invertible(A, rng)
    g = lambda z: jd.Element(A, a @ z.data @ a.conj().T)
    assert np.isclose(cone.riemann_metric(g(x), g(u), g(v)), cone.riemann_metric(x, u, v), rtol=1e-8)


def test_distance_examples():
    A = jd.make_algebra("sym_real", 2)
    e = A.unit()
    x = E(A, np.diag([np.e ** 2, np.e ** -1]))
    mu, delta = cone.compound_and_distance(x, e)
    assert abs(delta - np.sqrt(5)) < 1e-10
    assert np.allclose(mu, [4, 1])
    assert cone.compound_and_distance(x, x)[1] == pytest.approx(0, abs=1e-14)
    assert cone.hilbert_distance(E(A, np.diag([2.0, 1.0])), e) == pytest.approx(np.log(2), abs=1e-14)
    assert cone.hilbert_distance(x, 7 * x) == pytest.approx(0, abs=1e-12)
    assert cone.hilbert_distance(e, e) == 0


def test_relative_spectrum_matches_oracle(alg, rng):
    if not alg.is_matrix:
        pytest.skip("matrix oracle")
    x, y = sp.random_cone_point(alg, rng), sp.random_cone_point(alg, rng)
    assert np.allclose(cone.relative_spectrum(x, y), oracle_relative_eigs(x, y), rtol=1e-10)


def test_spin_distance_oracle(rng):
    # for the Lorentz cone, lambda_M / lambda_m of P(y^{-1/2})x equals the ratio of the
    # roots of det(x - t y) = 0, a quadratic in t
    S = jd.make_algebra("spin", 5)
    for _ in range(10):
        x, y = sp.random_cone_point(S, rng), sp.random_cone_point(S, rng)
        mink = lambda a, b: a[0] * b[0] - a[1:] @ b[1:]
        c2, c1, c0 = mink(y.data, y.data), -2 * mink(x.data, y.data), mink(x.data, x.data)
        roots = np.sort(np.roots([c2, c1, c0]).real)
        assert np.isclose(cone.hilbert_distance(x, y), np.log(roots[1] / roots[0]), rtol=1e-9)


def test_distance_properties(alg, rng):
    for _ in range(20):
        x, y, z = (sp.random_cone_point(alg, rng) for _ in range(3))
        d = cone.riemann_distance
        h = cone.hilbert_distance
        assert abs(d(x, y) - d(y, x)) < 1e-10
        assert d(x, z) + d(z, y) - d(x, y) >= -1e-9
        assert h(x, z) + h(z, y) - h(x, y) >= -1e-9
        assert abs(h(x, y) - cone.hilbert_distance_extremal(x, y)) < 1e-10
        assert abs(h(2.5 * x, 0.3 * y) - h(x, y)) < 1e-10
        g = sp.random_cone_automorphism(alg, rng)
        gx, gy = jd.apply_op(g, x), jd.apply_op(g, y)
        assert abs(d(gx, gy) - d(x, y)) < 1e-9 * max(1, d(x, y))
        a = sp.random_cone_point(alg, rng)
        assert abs(d(jd.quad(a, x), jd.quad(a, y)) - d(x, y)) < 1e-9 * max(1, d(x, y))


def test_bushell_examples():
    A = jd.make_algebra("sym_real", 2)
    a = cone.bushell_solve(np.eye(A.n), 2, A)
    assert (a - A.unit()).norm() < 1e-12
    t = np.array([1.7, 0.6])
    T = np.diag(t)
    a = cone.bushell_solve(lambda x: jd.Element(A, T.T @ x.data @ T), 2, A)
    assert np.allclose(a.data, np.diag(t ** 2), atol=1e-10)
    th = 0.4
    R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    a = cone.bushell_solve(lambda x: jd.Element(A, R.T @ x.data @ R), 2, A)
    assert (a - A.unit()).norm() < 1e-10
    with pytest.raises(BadExponent):
        cone.bushell_solve(np.eye(A.n), 1.0, A)


def test_bushell_uniqueness(alg, rng):
    for p in (2.0, 3.0, -2.0):
        g = sp.random_cone_automorphism(alg, rng)
        a = cone.bushell_solve(g, p, alg, x0=sp.random_cone_point(alg, rng))
        b = cone.bushell_solve(g, p, alg, x0=sp.random_cone_point(alg, rng))
        assert cone.hilbert_distance(a, b) <= 1e-7
        ap = jd.power(a, p)
        assert (jd.apply_op(g, a) - ap).norm() <= 1e-8 * ap.norm()


@pytest.fixture(params=[("sym_real", 3), ("herm_complex", 2)])
def malg(request):
    return jd.make_algebra(*request.param)


def test_compression_membership_examples(malg, rng):
    v = sp.random_cone_point(malg, rng)
    assert cone.compression_membership(cone.translation(v)) is Membership.IN_S1
    assert cone.compression_membership(cone.identity(malg)) is Membership.IN_S
    u = sp.random_cone_point(malg, rng)
    a = sp.random_invertible(malg, rng)
    g = cone.translation(u) @ cone.linear(malg, a) @ cone.inverse_translation(v)
    assert cone.compression_membership(g) is Membership.IN_S1_AND_S2
    assert cone.compression_membership(cone.translation(-v)) is Membership.NOT_IN_S
    assert cone.compression_membership(cone.inversion(malg)) is Membership.NOT_IN_S


def test_compression_apply_oracle(malg, rng):
    gam = sp.random_compression(malg, rng, "S1S2")
    A, B, C, D = gam.blocks
    x = sp.random_cone_point(malg, rng)
    oracle = (A @ x.data + B) @ np.linalg.inv(C @ x.data + D)
    assert np.allclose(cone.compression_apply(gam, x).data, oracle, atol=1e-10)


def test_factorization(malg, rng):
    v = sp.random_cone_point(malg, rng)
    f = cone.compression_factorize(cone.translation(v))
    assert np.allclose(f.u.data, v.data) and np.allclose(f.a, np.eye(malg.r)) and np.allclose(f.v.data, 0)
    f = cone.compression_factorize(cone.inverse_translation(v))
    assert np.allclose(f.u.data, 0) and np.allclose(f.a, np.eye(malg.r)) and np.allclose(f.v.data, v.data)
    u = sp.random_cone_point(malg, rng)
    a = sp.random_invertible(malg, rng)
    g = cone.translation(u) @ cone.linear(malg, a) @ cone.inverse_translation(v)
    f = cone.compression_factorize(g)
    assert np.allclose(f.u.data, u.data, atol=1e-8)
    assert np.allclose(f.v.data, v.data, atol=1e-8)
    assert np.allclose(f.g, jd.congruence_operator(malg, a), atol=1e-8)
    z = sp.random_cone_point(malg, rng)
    assert np.allclose(f.apply(z).data, g.apply(z).data, atol=1e-9)
    with pytest.raises(NotFactorizable):
        cone.compression_factorize(cone.inversion(malg))


def test_contraction_cases(malg, rng):
    rep = cone.contraction_check(cone.identity(malg), *(sp.random_cone_point(malg, rng) for _ in range(2)))
    assert rep.weak and np.allclose(rep.mu_before, rep.mu_after)
    for which, need in (("S", "weak"), ("S1", "strict"), ("S2", "strict")):
        for _ in range(10):
            gam = sp.random_compression(malg, rng, which)
            rep = cone.contraction_check(gam, sp.random_cone_point(malg, rng), sp.random_cone_point(malg, rng))
            assert getattr(rep, need)
    gam = sp.random_compression(malg, rng, "S1S2")
    pairs = [(sp.random_cone_point(malg, rng), sp.random_cone_point(malg, rng)) for _ in range(30)]
    assert cone.estimate_contraction_factor(gam, pairs) < 1
    with pytest.raises(NotInSemigroup):
        cone.contraction_check(cone.inversion(malg), *pairs[0])
