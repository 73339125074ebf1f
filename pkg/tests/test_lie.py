import numpy as np
import pytest

from symcone import jordan as jd
from symcone import lie
from symcone import sampling as sp
from symcone.errors import NotInQc
from symcone.lie import CayleyCone


def random_field(alg, rng):
    u, v = (sp.random_element(alg, rng, is_complex=True) for _ in range(2))
    a, x, y = (sp.random_element(alg, rng) for _ in range(3))
    return lie.LieField.from_elements(u, lie.structure_element(a, [(x, y)]), v)


def as_vector_field(X):
    return lambda z: X.evaluate(z)


def test_bracket_examples(alg, rng):
    X = random_field(alg, rng)
    assert lie.kkt_bracket(X, X).norm() < 1e-12
    z0 = alg.zero(True)
    u1, u2, v = (sp.random_element(alg, rng, is_complex=True) for _ in range(3))
    A = lie.LieField.from_elements(u1, np.zeros((alg.n, alg.n)), z0)
    B = lie.LieField.from_elements(u2, np.zeros((alg.n, alg.n)), z0)
    assert lie.kkt_bracket(A, B).norm() == 0
    C = lie.LieField.from_elements(z0, np.zeros((alg.n, alg.n)), v)
    br = lie.kkt_bracket(A, C)
    assert np.linalg.norm(br.u) == 0 and np.linalg.norm(br.v) == 0
    assert np.allclose(br.T, 2 * jd.box(u1, v))


def test_jacobi(alg, rng):
    for _ in range(5):
        X, Y, Z = (random_field(alg, rng) for _ in range(3))
        br = lie.kkt_bracket
        s = br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))
        assert s.norm() <= 1e-10 * X.norm() * Y.norm() * Z.norm()


def test_bracket_is_vector_field_commutator(rng):
    # oracle: [X, Y](z) = DY(z) X(z) - DX(z) Y(z), derivatives by central differences
    alg = jd.make_algebra("sym_real", 2)
    X, Y = random_field(alg, rng), random_field(alg, rng)
    z = sp.random_element(alg, rng, is_complex=True) * 0.5
    h = 1e-6

    def D(F, z, w):
        zp = jd.Element(alg, z.data + h * w.data, True)
        zm = jd.Element(alg, z.data - h * w.data, True)
        return (F.evaluate(zp) - F.evaluate(zm)) / (2 * h)

    lhs = lie.kkt_bracket(X, Y).evaluate(z)
    # the bracket of the Lie algebra is minus the vector field commutator
    rhs = D(X, z, Y.evaluate(z)) - D(Y, z, X.evaluate(z))
    assert (lhs - rhs).norm() < 1e-6 * max(1, lhs.norm())


def test_involutions(alg, rng):
    X = random_field(alg, rng)
    s, t = lie.involutions(X)
    assert (lie.theta_c(s) - lie.sigma_c(t)).norm() < 1e-14
    assert (lie.sigma_c(s) - X).norm() < 1e-14 and (lie.theta_c(t) - X).norm() < 1e-14
    # theta fixes (u, T, -u) with T skew
    a, b = sp.random_element(alg, rng), sp.random_element(alg, rng)
    K = jd.lmul(a) @ jd.lmul(b) - jd.lmul(b) @ jd.lmul(a)
    k = lie.LieField.from_elements(a.as_complex(), K, (-a).as_complex())
    assert (lie.theta_c(k) - k).norm() < 1e-12
    Y = random_field(alg, rng)
    # both are Lie algebra automorphisms
    for inv in (lie.sigma_c, lie.theta_c):
        d = inv(lie.kkt_bracket(X, Y)) - lie.kkt_bracket(inv(X), inv(Y))
        assert d.norm() < 1e-10 * X.norm() * Y.norm()


def test_cayley_cones(alg, rng):
    v = sp.random_cone_point(alg, rng)
    u = sp.random_cone_point(alg, rng)
    zero = alg.zero()
    # u + v and u - v decide membership
    assert lie.cayley_cone_membership(lie.q_field(zero, v)) is CayleyCone.NEITHER
    assert lie.cayley_cone_membership(lie.q_field(u, zero)) is CayleyCone.C2
    assert lie.cayley_cone_membership(lie.q_field(-u, zero)) is CayleyCone.NEITHER
    assert lie.cayley_cone_membership(lie.q_field(-v, v)) is CayleyCone.NEITHER
    assert lie.cayley_cone_membership(lie.q_field(u, -u)) is CayleyCone.BOTH
    assert lie.cayley_cone_membership(lie.q_field(v, v)) is CayleyCone.C2
    assert lie.cayley_cone_membership(lie.q_field(zero, -v)) is CayleyCone.C1
    assert lie.cayley_cone_membership(lie.q_field(-2 * v, v)) is CayleyCone.NEITHER
    X = random_field(alg, rng)
    with pytest.raises(NotInQc):
        lie.cayley_cone_membership(X)
