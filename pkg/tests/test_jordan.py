import numpy as np
import pytest

from symcone import jordan as jd
from symcone import sampling as sp
from symcone.errors import AlgebraMismatch, DomainError, InvalidSize, NotIdempotent, SingularElement
from symcone.jordan import ConeClass


def sym(*rows):
    return np.array(rows, dtype=float)


# oracle: dense matrix arithmetic, or the spin factor written out by hand
def oracle_product(alg, a, b):
    if alg.is_matrix:
        return (a @ b + b @ a) / 2
    t, v, s, w = a[0], a[1:], b[0], b[1:]
    return np.concatenate([[t * s + v @ w], t * w + s * v])


@pytest.mark.parametrize("kind,size,n,r,d", [
    ("sym_real", 2, 3, 2, 1), ("sym_real", 4, 10, 4, 1),
    ("herm_complex", 3, 9, 3, 2), ("spin", 4, 4, 2, 2), ("spin", 7, 7, 2, 5),
])
def test_dimension_table(kind, size, n, r, d):
    A = jd.make_algebra(kind, size)
    assert (A.n, A.r, A.d) == (n, r, d)
    # n = r + d r (r - 1) / 2 for every simple Euclidean Jordan algebra
    assert A.n == A.r + A.d * A.r * (A.r - 1) // 2


@pytest.mark.parametrize("kind,size", [("sym_real", 0), ("herm_complex", 0), ("spin", 2)])
def test_invalid_size(kind, size):
    with pytest.raises(InvalidSize):
        jd.make_algebra(kind, size)


def test_storage_is_exactly_symmetric(rng):
    A = jd.make_algebra("sym_real", 3)
    x = jd.Element(A, rng.normal(size=(3, 3)))
    assert np.array_equal(x.data, x.data.T)
    H = jd.make_algebra("herm_complex", 3)
    h = jd.Element(H, rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    assert np.array_equal(h.data, h.data.conj().T)


def test_basis_is_orthonormal(alg):
    B = alg.basis()
    G = np.array([[jd.inner(a, b) for b in B] for a in B])
    assert np.allclose(G, np.eye(alg.n), atol=1e-14)


def test_product_examples():
    A = jd.make_algebra("sym_real", 2)
    x = jd.Element(A, np.diag([1.0, 2.0]))
    y = jd.Element(A, sym([0, 1], [1, 0]))
    assert np.allclose(jd.product(x, y).data, sym([0, 1.5], [1.5, 0]))
    S = jd.make_algebra("spin", 3)
    z = jd.spin_element(S, 0.3, [1.2, -0.7])
    assert np.allclose(jd.product(S.unit(), z).data, z.data)


def test_product_matches_oracle(alg, rng):
    for _ in range(10):
        x, y = sp.random_element(alg, rng), sp.random_element(alg, rng)
        assert np.allclose(jd.product(x, y).data, oracle_product(alg, x.data, y.data), atol=1e-13)
        assert np.allclose(jd.product(x, alg.unit()).data, x.data)


def test_algebra_mismatch():
    with pytest.raises(AlgebraMismatch):
        jd.product(jd.make_algebra("sym_real", 2).unit(), jd.make_algebra("sym_real", 3).unit())


def test_operators_match_oracle(alg, rng):
    x, y = sp.random_element(alg, rng), sp.random_element(alg, rng)
    L = jd.lmul(x)
    assert np.allclose(L @ y.coords(), jd.product(x, y).coords(), atol=1e-13)
    # P(x) y against the definition 2 x(xy) - x^2 y evaluated with the oracle product
    xy = oracle_product(alg, x.data, y.data)
    direct = 2 * oracle_product(alg, x.data, xy) - oracle_product(alg, oracle_product(alg, x.data, x.data), y.data)
    assert np.allclose(jd.apply_op(jd.quad_rep(x), y).data, direct, atol=1e-12)
    assert np.allclose(jd.quad(x, y).data, direct, atol=1e-12)
    assert np.allclose(jd.quad_rep(alg.unit()), np.eye(alg.n))
    assert np.allclose(jd.lmul(alg.unit()), np.eye(alg.n))


def test_quad_rep_examples():
    A = jd.make_algebra("sym_real", 2)
    x = jd.Element(A, np.diag([1.0, 2.0]))
    y = jd.Element(A, sym([0, 1], [1, 0]))
    assert np.allclose(jd.apply_op(jd.quad_rep(x), y).data, sym([0, 2], [2, 0]))


def test_quad_rep_inverse(alg, rng):
    x = sp.random_cone_point(alg, rng)
    assert np.allclose(jd.quad_rep(jd.inverse(x)) @ jd.quad_rep(x), np.eye(alg.n), atol=1e-8)


def test_box(alg, rng):
    x, y, z = (sp.random_element(alg, rng) for _ in range(3))
    assert np.allclose(jd.box(x, alg.unit()), jd.lmul(x), atol=1e-13)
    assert np.allclose(jd.box(alg.unit(), y), jd.lmul(y), atol=1e-13)
    # x box y applied to z = x(yz) + z(xy)... written as {x y z}/2 with the triple product
    xyz = jd.product(jd.product(x, y), z) + jd.product(x, jd.product(y, z)) - jd.product(y, jd.product(x, z))
    assert np.allclose(jd.apply_op(jd.box(x, y), z).data, xyz.data, atol=1e-12)


def test_spectral_examples():
    A = jd.make_algebra("sym_real", 2)
    sd = jd.spectral(jd.Element(A, np.diag([3.0, -1.0])))
    assert np.allclose(sd.values, [3, -1])
    assert np.allclose(sd.frame[0].data, np.diag([1, 0]))
    assert np.allclose(sd.frame[1].data, np.diag([0, 1]))
    assert np.allclose(jd.spectral(A.unit()).values, 1)
    S = jd.make_algebra("spin", 4)
    v = np.array([1.0, -2.0, 2.0])
    assert np.allclose(jd.spectral(jd.spin_element(S, 0.5, v)).values, [3.5, -2.5])


def test_spectral_residuals(alg, rng):
    for _ in range(5):
        x = sp.random_element(alg, rng)
        sd = jd.spectral(x)
        for c in sd.frame:
            assert (jd.square(c) - c).norm() < 1e-10
            assert abs(jd.trace(c) - 1) < 1e-10
        G = np.array([[jd.inner(a, b) for b in sd.frame] for a in sd.frame])
        assert np.allclose(G, np.eye(alg.r), atol=1e-10)
        assert (sd.reconstruct() - x).norm() < 1e-10 * x.norm()
        if alg.is_matrix:
            assert np.allclose(np.sort(sd.values), np.linalg.eigvalsh(x.data), atol=1e-12)


def test_det_tr():
    A = jd.make_algebra("sym_real", 2)
    assert np.allclose(jd.det_tr(jd.Element(A, np.diag([3.0, -1.0]))), (-3, 2))
    assert np.allclose(jd.det_tr(jd.make_algebra("herm_complex", 3).unit()), (1, 3))
    S = jd.make_algebra("spin", 3)
    assert np.allclose(jd.det_tr(jd.spin_element(S, 2.0, [1.0, 1.0])), (2.0, 4.0))


def test_funcalc():
    A = jd.make_algebra("sym_real", 2)
    assert np.allclose(jd.inverse(jd.Element(A, np.diag([2.0, 4.0]))).data, np.diag([0.5, 0.25]))
    assert np.allclose(jd.sqrt(A.unit()).data, np.eye(2))
    assert np.allclose(jd.power(jd.Element(A, np.diag([4.0, 9.0])), 0.5).data, np.diag([2, 3]))
    with pytest.raises(DomainError):
        jd.log(jd.Element(A, np.diag([1.0, -1.0])))
    with pytest.raises(SingularElement):
        jd.inverse(jd.Element(A, np.diag([1.0, 0.0])))


def test_funcalc_matches_scipy(rng):
    import scipy.linalg as sla

    A = jd.make_algebra("herm_complex", 3)
    x = sp.random_element(A, rng)
    assert np.allclose(jd.exp(x).data, sla.expm(x.data), atol=1e-12)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_peirce_block_dimensions(r):
    A = jd.make_algebra("sym_real", r)
    for p in range(r + 1):
        q = r - p
        pd = jd.peirce(jd.Element(A, np.diag([1.0] * p + [0.0] * q)))
        assert pd.dims() == (p * (p + 1) // 2, p * q, q * (q + 1) // 2)
        I = np.eye(A.n)
        assert np.allclose(pd.E1 + pd.Ehalf + pd.E0, I)
        for P in (pd.E1, pd.Ehalf, pd.E0):
            assert np.allclose(P @ P, P, atol=1e-12)
        assert np.allclose(pd.E1 @ pd.E0, 0, atol=1e-12)


def test_peirce_ranges_are_eigenspaces(alg, rng):
    c = jd.spectral(sp.random_element(alg, rng)).frame[0]
    pd = jd.peirce(c)
    L = jd.lmul(c)
    for P, lam in ((pd.E1, 1.0), (pd.Ehalf, 0.5), (pd.E0, 0.0)):
        assert np.allclose(L @ P, lam * P, atol=1e-10)


def test_peirce_trivial_and_error():
    A = jd.make_algebra("sym_real", 3)
    assert np.allclose(jd.peirce(A.unit()).E1, np.eye(A.n))
    assert np.allclose(jd.peirce(A.zero()).E0, np.eye(A.n))
    with pytest.raises(NotIdempotent):
        jd.peirce(jd.Element(A, np.diag([2.0, 0, 0])))


def test_cone_classification():
    A = jd.make_algebra("sym_real", 2)
    assert jd.cone_classify(A.unit()) is ConeClass.INTERIOR
    assert jd.signature_orbit(A.unit()) == 2
    assert jd.cone_classify(-A.unit()) is ConeClass.EXTERIOR
    assert jd.signature_orbit(-A.unit()) == 0
    x = jd.Element(A, np.diag([1.0, -1.0]))
    assert jd.cone_classify(x) is ConeClass.EXTERIOR and jd.signature_orbit(x) == 1
    assert jd.cone_classify(jd.Element(A, np.diag([1.0, 0.0]))) is ConeClass.BOUNDARY
    with pytest.raises(SingularElement):
        jd.signature_orbit(jd.Element(A, np.diag([1.0, 0.0])))


def test_signature_invariant_under_congruence(rng):
    for kind in ("sym_real", "herm_complex"):
        A = jd.make_algebra(kind, 4)
        for _ in range(10):
            x = sp.random_element(A, rng)
            a = sp.random_invertible(A, rng)
            y = jd.Element(A, a @ x.data @ a.conj().T)
            assert jd.signature_orbit(x) == jd.signature_orbit(y)
