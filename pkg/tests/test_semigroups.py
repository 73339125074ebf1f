import warnings
from fractions import Fraction

import numpy as np
import pytest

from symcone import semigroups as sg
from symcone.errors import (
    BadBound,
    BranchMismatch,
    NotInTube,
    NotInvertible,
    NotStrict,
    OnSingularSet,
    SingularDifference,
    SizeMismatch,
)
from symcone.semigroups import Grade

KINDS = [sg.sp(1), sg.sp(2), sg.sp(3), sg.so_star(2), sg.so_star(3), sg.upq(1, 1), sg.upq(2, 1), sg.upq(0, 2)]


@pytest.fixture(params=KINDS, ids=[k.label() for k in KINDS])
def kind(request):
    return request.param


def psd_defect(G):
    G = (G + G.conj().T) / 2
    return -np.linalg.eigvalsh(G).min() / np.trace(G).real


def test_hardy_table():
    for r in (1, 2, 3):
        k = sg.sp(r)
        assert (k.N, k.R, k.kernel_exponent) == (r * (2 * r + 1), 2 * r, Fraction(2 * r + 1, 2))
    for l in (2, 3, 4):
        k = sg.so_star(l)
        assert (k.N, k.R, k.kernel_exponent) == (l * (2 * l - 1), l, Fraction(2 * l - 1, 2))
    k = sg.upq(2, 3)
    assert (k.N, k.R, k.kernel_exponent) == (25, 5, 5)


def test_membership_examples(kind):
    I = sg.SemigroupElement(kind, np.eye(kind.m))
    assert sg.semigroup_membership(I) is Grade.BOUNDARY
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if kind.q >= 1:
            assert sg.semigroup_membership(sg.SemigroupElement(kind, 2 * np.eye(kind.m))) is Grade.OUTSIDE
    with pytest.raises(SizeMismatch):
        sg.SemigroupElement(kind, np.eye(kind.m + 1))


def test_membership_oracle():
    g = sg.SemigroupElement(sg.upq(1, 1), np.diag([3.0, 1 / 3]))
    J = np.diag([-1.0, 1.0])
    assert np.allclose(J - g.gamma.conj().T @ J @ g.gamma, np.diag([8, 8 / 9]))
    assert sg.semigroup_membership(g) is Grade.STRICT


def test_group_warning():
    with pytest.warns(sg.GroupCompatibilityWarning):
        sg.semigroup_membership(sg.SemigroupElement(sg.sp(1), np.diag([0.5, 0.5])))


def test_cayley_example():
    Z = sg.TubePoint(sg.upq(1, 1), 2j * np.eye(2))
    g = sg.cayley_C(Z)
    # (Z - iJ)(Z + iJ)^{-1} = diag(3i, i) diag(i, 3i)^{-1}
    assert np.allclose(g.gamma, np.diag([3, 1 / 3]))
    with pytest.raises(OnSingularSet):
        sg.cayley_C(sg.TubePoint(sg.upq(1, 1), 1j * np.eye(2)))
    with pytest.raises(NotInvertible):
        sg.cayley_C_inverse(sg.SemigroupElement(sg.upq(1, 1), np.eye(2)))
    with pytest.raises(NotInTube):
        sg.TubePoint(sg.upq(1, 1), -1j * np.eye(2))


def test_tube_space_conditions(rng):
    with pytest.raises(NotInTube):
        # b must be symmetric for Sp
        b = np.array([[0, 1], [-1, 0]])
        a = np.eye(2)
        sg.TubePoint(sg.sp(2), np.block([[a, b], [b, a]]) * 0.1 + 1j * np.eye(4))


def test_cayley_roundtrip_and_image(kind, rng):
    for _ in range(30):
        Z = sg.random_tube_point(kind, rng)
        g = sg.cayley_C(Z)
        assert g.grade is Grade.STRICT
        assert sg.group_defect(kind, g.gamma) < 1e-12
        assert np.abs(sg.cayley_C_inverse(g).Z - Z.Z).max() < 1e-9 * max(1, np.abs(Z.Z).max())


def test_strict_closure(kind, rng):
    for _ in range(20):
        a, b = (sg.cayley_C(sg.random_tube_point(kind, rng)) for _ in range(2))
        assert (a @ b).grade is Grade.STRICT


def test_tube_kernel(kind, rng):
    Z = sg.random_tube_point(kind, rng)
    W = sg.random_tube_point(kind, rng)
    k = sg.szego_kernel_tube(Z, Z)
    assert abs(k.imag) < 1e-12 * abs(k) and k.real > 0
    assert np.isclose(sg.szego_kernel_tube(Z, W), np.conj(sg.szego_kernel_tube(W, Z)))
    pts = [sg.random_tube_point(kind, rng) for _ in range(6)]
    G = np.array([[sg.szego_kernel_tube(a, b) for b in pts] for a in pts])
    assert psd_defect(G) <= 1e-8


def test_tube_kernel_scalar():
    assert sg.szego_kernel_tube(np.array([[1j]]), np.array([[1j]]), 1.0) == pytest.approx(1)
    with pytest.raises(SingularDifference):
        sg.szego_kernel_tube(np.array([[1.0]]), np.array([[1.0]]), 1.0)


def test_semigroup_kernel_examples():
    k = sg.upq(1, 1)
    g = sg.SemigroupElement(k, np.diag([3.0, 1 / 3]))
    assert sg.szego_kernel_semigroup(g, g) == pytest.approx((64 / 9) ** -2)
    with pytest.raises(NotStrict):
        sg.szego_kernel_semigroup(g, sg.SemigroupElement(k, np.eye(2)))
    with pytest.raises(BranchMismatch):
        s = sg.cayley_C(sg.random_tube_point(sg.sp(1), np.random.default_rng(0)))
        sg.szego_kernel_semigroup(s, s)


def test_semigroup_kernel_properties(kind, rng):
    els = [sg.cayley_C(sg.random_tube_point(kind, rng), with_branch=True) for _ in range(8)]
    G = np.array([[sg.szego_kernel_semigroup(a, b) for b in els] for a in els])
    assert np.allclose(G, G.conj().T, rtol=1e-9, atol=0)
    assert psd_defect(G) <= 1e-8
    # |K|^2 against the matrix power, an oracle independent of the branch choice
    J = kind.J
    a, b = els[0], els[1]
    D = np.linalg.det(J - b.gamma.conj().T @ J @ a.gamma)
    e = float(kind.kernel_exponent)
    assert np.isclose(abs(sg.szego_kernel_semigroup(a, b)), abs(D) ** -e, rtol=1e-9)


def test_kernel_transport(kind, rng):
    # Det(Z+iJ)^-p conj(Det(W+iJ))^-p K(C Z, C W) = c K_tube(Z, W) with a single constant c
    p2 = int(2 * kind.kernel_exponent)
    ratios = []
    for _ in range(10):
        Z, W = sg.random_tube_point(kind, rng), sg.random_tube_point(kind, rng)
        a, b = sg.cayley_C(Z, True), sg.cayley_C(W, True)
        lhs = a.w ** p2 * np.conj(b.w) ** p2 * sg.szego_kernel_semigroup(a, b)
        ratios.append(lhs / sg.szego_kernel_tube(Z, W))
    assert np.allclose(ratios, ratios[0], rtol=1e-9)
    assert np.isclose(ratios[0], sg.transport_constant(kind), rtol=1e-9)


def test_bergman(rng):
    for r in (1, 2, 3):
        k = sg.sp(r)
        for _ in range(10):
            a, b = (sg.cayley_C(sg.random_tube_point(k, rng), True) for _ in range(2))
            kb = sg.bergman_kernel(a, b)
            assert abs(kb - sg.szego_kernel_semigroup(a, b) ** 2) <= 1e-9 * abs(kb)


def test_metaplectic(kind, rng):
    els = [sg.cayley_C(sg.random_tube_point(kind, rng), True) for _ in range(10)]
    prod = els[0]
    for e in els[1:]:
        prod = sg.metaplectic_mul(prod, e)
        assert sg.branch_defect(prod) <= 1e-8
    a, b, c = els[:3]
    x = sg.metaplectic_mul(sg.metaplectic_mul(a, b), c)
    y = sg.metaplectic_mul(a, sg.metaplectic_mul(b, c))
    assert np.allclose(x.gamma, y.gamma)
    assert abs(x.w - y.w) <= 1e-9 * abs(x.w)
    # the identity limit is a neutral element
    for t in (1e-3, 1e-5):
        n = sg.metaplectic_mul(a, sg.identity_approximant(kind, t))
        assert abs(n.w - a.w) <= 50 * t * abs(a.w)


def test_identity_approximant_is_a_semigroup(kind):
    a, b = sg.identity_approximant(kind, 0.3), sg.identity_approximant(kind, 0.5)
    ab = sg.metaplectic_mul(a, b)
    c = sg.identity_approximant(kind, 0.8)
    assert np.allclose(ab.gamma, c.gamma) and np.isclose(ab.w, c.w)


def test_intertwiner():
    k = sg.upq(1, 1)
    Z = sg.TubePoint(k, 2j * np.eye(2))
    assert sg.intertwiner_pullback(lambda g: 1.0, k, 0)(Z) == pytest.approx(1)
    assert sg.intertwiner_pullback(lambda g: 1.0, k, 2)(Z) == pytest.approx(1 / 9)
    k = sg.sp(1)
    Z = sg.random_tube_point(k, np.random.default_rng(3))
    d = np.linalg.det(Z.Z + 1j * k.J)
    val = sg.intertwiner_pullback(lambda g: 1.0, k)(Z)
    # half-integer power: the square is Det^{-3}, and the root is w^3 with w principal
    assert np.isclose(val ** 2, d ** -3)
    assert np.isclose(val, np.sqrt(1 / d) ** 3)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_weights_sp_odd(r):
    ws = sg.weight_enumerate(sg.sp(r), 4, "odd")
    for w in ws:
        lam = w.lam
        assert w.is_half and all(x.denominator == 2 for x in lam)
        assert lam[0] <= -(r + Fraction(1, 2)) and list(lam) == sorted(lam, reverse=True)
        assert all(abs(x) <= 4 for x in lam)


def test_weight_examples():
    assert [w.lam for w in sg.weight_enumerate(sg.sp(1), 3)] == [(Fraction(-3, 2),), (Fraction(-5, 2),)]
    got = {w.lam for w in sg.weight_enumerate(sg.sp(2), 4, "even")}
    want = {(a, b) for a in range(-4, 5) for b in range(-4, 5) if -2 > a >= b >= -4}
    assert got == want
    assert sg.weight_enumerate(sg.sp(3), 2, "odd") == []
    with pytest.raises(BadBound):
        sg.weight_enumerate(sg.sp(1), -1)


def test_weights_so_star():
    for w in sg.weight_enumerate(sg.so_star(3), 4, "even"):
        assert w.lam[0] + w.lam[1] < -3
    for w in sg.weight_enumerate(sg.so_star(3), 4, "odd"):
        assert w.lam[0] <= 0 and w.lam[0] + w.lam[1] <= -4


def test_weights_upq_brute_force():
    k = sg.upq(1, 2)
    n, bound = 3, 3
    want = set()
    rng_ = range(-bound, bound + 1)
    for lam in np.ndindex(*(len(rng_),) * n):
        lam = tuple(rng_[i] for i in lam)
        if not (0 >= lam[0] and lam[1] >= lam[2] >= 0 and lam[2] - lam[0] > n - 1):
            continue
        s = sum(lam)
        for kk in range(s - n * lam[2], s - n * lam[0] + 1):
            want.add((lam, kk))
    got = {(tuple(int(x) for x in w.lam), w.k) for w in sg.weight_enumerate(k, bound)}
    assert got == want
    assert all(w.assumption == "[lam]=sum" for w in sg.weight_enumerate(k, bound))


def test_weights_antitone():
    for kind, par in ((sg.sp(2), "odd"), (sg.so_star(2), "even"), (sg.upq(2, 1), "odd")):
        small = set(sg.weight_enumerate(kind, 2, par))
        assert small <= set(sg.weight_enumerate(kind, 3, par))
