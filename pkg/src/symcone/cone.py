"""Metric geometry of the symmetric cone and its compression semigroup.

Distances
---------
For interior x, y let ``lambda_k`` be the spectral values of
``P(y^{-1/2}) x``.  The Riemannian distance is
``delta = sqrt(sum log(lambda_k)^2)`` and the Hilbert projective distance
is ``log(lambda_max / lambda_min)``.

Compressions
------------
For matrix kinds the conformal group acts on V_C by linear fractional maps
``z -> (Az + B)(Cz + D)^{-1}`` with ``[[A, B], [C, D]]`` preserving the
form ``[[0, I], [-I, 0]]`` (transpose for ``sym_real``, conjugate
transpose for ``herm_complex``).  Every element with invertible D splits as
``[[I, u], [0, I]] [[a, 0], [0, a^{-*}]] [[I, 0], [v, I]]``, that is
``D = a^{-*}``, ``u = B D^{-1}``, ``v = D^{-1} C``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jordan as jd
from .errors import (
    BadExponent,
    DomainError,
    NoConvergence,
    NotFactorizable,
    NotImplementedForKind,
    NotInSemigroup,
    NotInterior,
    SingularAction,
)
from .jordan import Algebra, Element, Kind


def _check_interior(*xs: Element):
    for x in xs:
        if x.is_complex or jd.cone_classify(x) is not jd.ConeClass.INTERIOR:
            raise NotInterior("point is not in the open cone")


def riemann_metric(x: Element, u: Element, v: Element) -> float:
    """Invariant metric ``g_x(u, v) = (P(x)^{-1} u | v)``."""
    _check_interior(x)
    return jd.inner(jd.quad(jd.inverse(x), u), v)


def relative_spectrum(x: Element, y: Element) -> np.ndarray:
    """Spectral values of ``P(y^{-1/2}) x``, descending."""
    _check_interior(x, y)
    w = jd.power(y, -0.5)
    return jd.spectral_values(jd.quad(w, x))


def compound_and_distance(x: Element, y: Element) -> tuple[np.ndarray, float]:
    """Compound distances ``mu_k`` (descending) and the Riemannian distance.

    Returns
    -------
    mu : ndarray
        ``log(lambda_k)**2`` sorted in descending order.
    delta : float
        ``sqrt(sum(mu))``.
    """
    lam = relative_spectrum(x, y)
    mu = np.sort(np.log(lam) ** 2)[::-1]
    return mu, float(np.sqrt(mu.sum()))


def riemann_distance(x: Element, y: Element) -> float:
    return compound_and_distance(x, y)[1]


def hilbert_distance(x: Element, y: Element) -> float:
    """Hilbert projective distance ``log(lambda_M / lambda_m)``."""
    lam = relative_spectrum(x, y)
    return float(np.log(lam[0]) - np.log(lam[-1]))


def hilbert_distance_extremal(x: Element, y: Element) -> float:
    """Same distance from ``log(lambda_M(x, y) * lambda_M(y, x))``.

    ``lambda_M(x, y)`` is the least t with ``t y - x`` in the closed cone.
    """
    return float(np.log(relative_spectrum(x, y)[0]) + np.log(relative_spectrum(y, x)[0]))


def thompson_distance(x: Element, y: Element) -> float:
    lam = relative_spectrum(x, y)
    return float(np.abs(np.log(lam)).max())


# ---------------------------------------------------------------------------
# Bushell equation g(a) = a^p


def _as_map(g) -> Callable[[Element], Element]:
    if callable(g):
        return g
    T = np.asarray(g)
    return lambda x: jd.apply_op(T, x)


def bushell_solve(g, p: float, alg: Algebra | None = None, x0: Element | None = None,
                  max_iter: int = 10_000, tol: float = 1e-13, check_points: int = 3,
                  rng: np.random.Generator | None = None) -> Element:
    """Solve ``g(a) = a^p`` for a linear cone automorphism g.

    Parameters
    ----------
    g : callable or ndarray
        Map Element -> Element, or an n x n operator matrix.
    p : float
        Exponent with ``|p| > 1``.
    alg : Algebra, optional
        Needed when ``x0`` is not given.
    x0 : Element, optional
        Starting point (defaults to the unit).
    tol : float
        Stop once two successive iterates are within ``tol`` in the
        Thompson metric (this bounds the Hilbert distance too).

    Notes
    -----
    The iteration ``a <- g(a)^(1/p)`` contracts the Thompson metric by
    ``1/|p|``, because g is an isometry and ``x -> x^s`` is ``|s|``-Lipschitz.
    """
    if not np.isfinite(p) or abs(p) <= 1:
        raise BadExponent("need |p| > 1")
    gm = _as_map(g)
    if x0 is None:
        if alg is None:
            raise DomainError("give alg or x0")
        x0 = alg.unit()
    _check_interior(x0)
    alg = x0.algebra
    rng = rng if rng is not None else np.random.default_rng(0)
    # sampled check that g preserves the cone
    probes = [alg.unit()] + [jd.exp(jd.Element(alg, _sym_noise(alg, rng))) for _ in range(check_points)]
    for z in probes:
        gz = gm(z)
        if gz.is_complex or jd.cone_classify(gz) is not jd.ConeClass.INTERIOR:
            raise DomainError("g does not map the cone into itself")

    inv_p = 1.0 / p
    a = x0
    for _ in range(max_iter):
        ga = gm(a)
        # clip the spectrum so roundoff cannot push an iterate out of the cone
        nxt = jd.funcalc(ga, lambda t: max(t, 1e-300) ** inv_p)
        step = thompson_distance(nxt, a)
        a = nxt
        if step <= tol:
            break
    else:
        raise NoConvergence(f"no convergence after {max_iter} iterations")
    ap = jd.power(a, p)
    res = (gm(a) - ap).norm()
    if res > 1e-8 * ap.norm():
        raise NoConvergence(f"fixed point residual {res:.3e}")
    return a


def _sym_noise(alg: Algebra, rng):
    return alg.from_coords(rng.normal(size=alg.n)).data


# ---------------------------------------------------------------------------
# compression semigroup


class Membership(str, enum.Enum):
    IN_S = "InS"
    IN_S1 = "InS1"
    IN_S2 = "InS2"
    IN_S1_AND_S2 = "InS1andS2"
    NOT_IN_S = "NotInS"


def _require_matrix(alg: Algebra):
    if not alg.is_matrix:
        raise NotImplementedForKind("compressions are realized for matrix kinds only")


def _star(alg: Algebra, m):
    return m.conj().T if alg.kind is Kind.HERM_COMPLEX else m.T


def symplectic_form(r: int) -> np.ndarray:
    z = np.zeros((r, r))
    i = np.eye(r)
    return np.block([[z, i], [-i, z]])


class CompressionElement:
    """Linear fractional map ``z -> (Az + B)(Cz + D)^{-1}``."""

    def __init__(self, alg: Algebra, matrix, check: bool = True):
        _require_matrix(alg)
        m = np.asarray(matrix)
        r = alg.r
        if m.shape != (2 * r, 2 * r):
            raise DomainError(f"expected a {2 * r}x{2 * r} block matrix")
        m = m.astype(complex if alg.kind is Kind.HERM_COMPLEX else float)
        if alg.kind is Kind.SYM_REAL and np.iscomplexobj(matrix) and np.any(np.imag(matrix) != 0):
            raise DomainError("sym_real compressions are real matrices")
        self.algebra = alg
        self.matrix = m
        if check:
            J = symplectic_form(r)
            err = np.linalg.norm(_star(alg, m) @ J @ m - J)
            if err > 1e-8 * max(1.0, np.linalg.norm(m) ** 2):
                raise DomainError(f"matrix does not preserve the defining form (residual {err:.2e})")

    @property
    def blocks(self):
        r = self.algebra.r
        m = self.matrix
        return m[:r, :r], m[:r, r:], m[r:, :r], m[r:, r:]

    def __matmul__(self, other: "CompressionElement") -> "CompressionElement":
        return CompressionElement(self.algebra, self.matrix @ other.matrix, check=False)

    def apply(self, z: Element) -> Element:
        A, B, C, D = self.blocks
        den = C @ z.data + D
        if np.linalg.cond(den) > 1e12:
            raise SingularAction("Cz + D is singular")
        out = np.linalg.solve(den.T, (A @ z.data + B).T).T
        return Element(self.algebra, out, z.is_complex)

    __call__ = apply


def identity(alg: Algebra) -> CompressionElement:
    return CompressionElement(alg, np.eye(2 * alg.r))


def translation(v: Element) -> CompressionElement:
    """``z -> z + v``."""
    r = v.algebra.r
    return CompressionElement(v.algebra, np.block([[np.eye(r), v.data], [np.zeros((r, r)), np.eye(r)]]))


def inverse_translation(v: Element) -> CompressionElement:
    """``z -> (z^{-1} + v)^{-1}``, matrix ``[[I, 0], [v, I]]``."""
    r = v.algebra.r
    return CompressionElement(v.algebra, np.block([[np.eye(r), np.zeros((r, r))], [v.data, np.eye(r)]]))


def linear(alg: Algebra, a) -> CompressionElement:
    """``z -> a z a^*`` with a invertible."""
    _require_matrix(alg)
    a = np.asarray(a)
    ainv = np.linalg.inv(a)
    r = alg.r
    z = np.zeros((r, r))
    return CompressionElement(alg, np.block([[a, z], [z, _star(alg, ainv)]]))


def inversion(alg: Algebra) -> CompressionElement:
    """``z -> -z^{-1}``."""
    _require_matrix(alg)
    return CompressionElement(alg, symplectic_form(alg.r))


@dataclass
class FactoredCompression:
    """``gamma = gamma^+_u o (z -> a z a^*) o gamma^-_v``."""

    u: Element
    a: np.ndarray
    v: Element

    @property
    def g(self) -> np.ndarray:
        """Operator matrix of the linear part on V."""
        return jd.congruence_operator(self.u.algebra, self.a)

    def apply(self, z: Element) -> Element:
        w = inverse_translation(self.v).apply(z)
        w = Element(z.algebra, self.a @ w.data @ self.a.conj().T, z.is_complex)
        return w + self.u


def compression_factorize(gamma: CompressionElement) -> FactoredCompression:
    """Split gamma as ``N+ G0 N-``.

    Raises
    ------
    NotFactorizable
        If the lower right block is singular.
    """
    alg = gamma.algebra
    A, B, C, D = gamma.blocks
    if np.linalg.cond(D) > 1e12:
        raise NotFactorizable("block D is singular")
    Dinv = np.linalg.inv(D)
    u = B @ Dinv
    v = Dinv @ C
    a = _star(alg, Dinv)
    for m in (u, v):
        if np.linalg.norm(m - _star(alg, m)) > 1e-8 * max(1.0, np.linalg.norm(m)):
            raise NotFactorizable("factors are not self-adjoint")
    return FactoredCompression(Element(alg, u), a, Element(alg, v))


def compression_apply(gamma: CompressionElement, z: Element) -> Element:
    return gamma.apply(z)


def compression_membership(gamma: CompressionElement, tol: float = 1e-9) -> Membership:
    """Decide membership in the compression semigroup and its ideals."""
    try:
        f = compression_factorize(gamma)
    except NotFactorizable:
        return Membership.NOT_IN_S
    cu = jd.cone_classify(f.u, tol)
    cv = jd.cone_classify(f.v, tol)
    if jd.ConeClass.EXTERIOR in (cu, cv):
        return Membership.NOT_IN_S
    s1 = cu is jd.ConeClass.INTERIOR
    s2 = cv is jd.ConeClass.INTERIOR
    if s1 and s2:
        return Membership.IN_S1_AND_S2
    if s1:
        return Membership.IN_S1
    if s2:
        return Membership.IN_S2
    return Membership.IN_S


@dataclass
class ContractionReport:
    membership: Membership
    mu_before: np.ndarray
    mu_after: np.ndarray
    delta_before: float
    delta_after: float
    weak: bool
    strict: bool
    ratio: float = field(default=float("nan"))


def contraction_check(gamma: CompressionElement, x: Element, y: Element,
                      rtol: float = 1e-9) -> ContractionReport:
    """Compare compound distances before and after applying gamma.

    ``weak`` means every ``mu_k`` (sorted descending on both sides) does not
    increase, up to ``rtol``.  ``strict`` means every ``mu_k`` decreases.
    """
    memb = compression_membership(gamma)
    if memb is Membership.NOT_IN_S:
        raise NotInSemigroup("gamma does not compress the cone")
    _check_interior(x, y)
    mb, db = compound_and_distance(x, y)
    gx, gy = gamma.apply(x), gamma.apply(y)
    ma, da = compound_and_distance(gx, gy)
    slack = rtol * max(1.0, mb.max())
    weak = bool(np.all(ma <= mb + slack))
    strict = bool(np.all(ma < mb))
    ratio = da / db if db > 0 else float("nan")
    return ContractionReport(memb, mb, ma, db, da, weak, strict, ratio)


def estimate_contraction_factor(gamma: CompressionElement, pairs) -> float:
    """Empirical ``max delta(gx, gy) / delta(x, y)`` over sampled pairs."""
    worst = 0.0
    for x, y in pairs:
        rep = contraction_check(gamma, x, y)
        if rep.delta_before > 0:
            worst = max(worst, rep.ratio)
    return worst
