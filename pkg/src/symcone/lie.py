"""Polynomial vector fields ``X(z) = u + T z - P(z) v`` on V_C and their bracket.

A field is stored as ``(u, T, v)`` with u, v complex coordinate vectors and
T a complex n x n operator from the structure algebra.  The adjoint ``T*``
is the transpose in the orthonormal basis, i.e. the adjoint for the
bilinear trace form, which keeps the bracket complex bilinear.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import jordan as jd
from .errors import AlgebraMismatch, NotInQc
from .jordan import Algebra, Element


class CayleyCone(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    BOTH = "Both"
    NEITHER = "Neither"


@dataclass(frozen=True)
class LieField:
    algebra: Algebra
    u: np.ndarray
    T: np.ndarray
    v: np.ndarray

    @classmethod
    def from_elements(cls, u: Element, T, v: Element) -> "LieField":
        if u.algebra != v.algebra:
            raise AlgebraMismatch("u and v belong to different algebras")
        n = u.algebra.n
        T = np.asarray(T, dtype=complex)
        if T.shape != (n, n):
            raise AlgebraMismatch(f"T must be {n}x{n}")
        return cls(u.algebra, u.as_complex().coords(), T, v.as_complex().coords())

    @classmethod
    def zero(cls, alg: Algebra) -> "LieField":
        n = alg.n
        return cls(alg, np.zeros(n, complex), np.zeros((n, n), complex), np.zeros(n, complex))

    def __add__(self, other: "LieField") -> "LieField":
        _same(self, other)
        return LieField(self.algebra, self.u + other.u, self.T + other.T, self.v + other.v)

    def __sub__(self, other: "LieField") -> "LieField":
        return self + (-1) * other

    def __mul__(self, s) -> "LieField":
        return LieField(self.algebra, s * self.u, s * self.T, s * self.v)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sqrt(np.linalg.norm(self.u) ** 2 + np.linalg.norm(self.T) ** 2
                             + np.linalg.norm(self.v) ** 2))

    def element_u(self) -> Element:
        return self.algebra.from_coords(self.u, is_complex=True)

    def element_v(self) -> Element:
        return self.algebra.from_coords(self.v, is_complex=True)

    def evaluate(self, z: Element) -> Element:
        """``X(z) = u + T z - P(z) v``."""
        z = z.as_complex()
        tz = jd.apply_op(self.T, z).as_complex()
        return self.element_u() + tz - jd.quad(z, self.element_v())


def _same(a: LieField, b: LieField):
    if a.algebra != b.algebra:
        raise AlgebraMismatch("fields belong to different algebras")


def structure_element(a: Element, pairs=()) -> np.ndarray:
    """``L(a) + sum [L(x), L(y)]``, a generic structure algebra element."""
    T = jd.lmul(a).astype(complex)
    for x, y in pairs:
        lx, ly = jd.lmul(x), jd.lmul(y)
        T = T + lx @ ly - ly @ lx
    return T


def kkt_bracket(X1: LieField, X2: LieField) -> LieField:
    """Bracket ``[X1, X2]``.

    ``u = T1 u2 - T2 u1``, ``T = [T1, T2] + 2 u1 box v2 - 2 u2 box v1``,
    ``v = -T1* v2 + T2* v1``.
    """
    _same(X1, X2)
    alg = X1.algebra
    el = lambda c: alg.from_coords(c, is_complex=True)
    u = X1.T @ X2.u - X2.T @ X1.u
    T = (X1.T @ X2.T - X2.T @ X1.T
         + 2 * jd.box(el(X1.u), el(X2.v)) - 2 * jd.box(el(X2.u), el(X1.v)))
    v = -X1.T.T @ X2.v + X2.T.T @ X1.v
    return LieField(alg, u, T, v)


def sigma_c(X: LieField) -> LieField:
    """``(u, T, v) -> (v, -T*, u)``."""
    return LieField(X.algebra, X.v.copy(), -X.T.T, X.u.copy())


def theta_c(X: LieField) -> LieField:
    """``(u, T, v) -> (-v, -T*, -u)``, conjugation by ``z -> -z^{-1}``.

    This is a Lie algebra automorphism commuting with ``sigma_c``; its fixed
    points are the fields ``(u, T, -u)`` with ``T* = -T``.
    """
    return LieField(X.algebra, -X.v, -X.T.T, -X.u)


def involutions(X: LieField) -> tuple[LieField, LieField]:
    return sigma_c(X), theta_c(X)


def q_field(u: Element, v: Element) -> LieField:
    """Field ``(u, 2 L(v), -u)`` with u, v real."""
    return LieField.from_elements(u.as_complex(), 2 * jd.lmul(v), (-u).as_complex())


def cayley_cone_membership(X: LieField, tol: float = 1e-9) -> CayleyCone:
    """Classify ``(u, 2 L(v), -u)``.

    C1 needs ``u + v`` in ``-closure(Omega)`` and ``u - v`` in the closure;
    C2 needs both ``u + v`` and ``u - v`` in the closure.
    """
    alg = X.algebra
    scale = max(1.0, X.norm())
    if np.abs(X.u.imag).max(initial=0) > tol * scale or np.abs(X.T.imag).max(initial=0) > tol * scale:
        raise NotInQc("field is not real")
    if np.linalg.norm(X.u + X.v) > tol * scale:
        raise NotInQc("field is not of the form (u, 2L(v), -u)")
    # recover v from T = 2 L(v): L(v) e = v
    v = alg.from_coords(0.5 * X.T.real @ alg.unit().coords())
    if np.linalg.norm(X.T.real - 2 * jd.lmul(v)) > tol * scale:
        raise NotInQc("T is not a multiplication operator")
    u = alg.from_coords(X.u.real)
    # closure tests relative to the field size, so roundoff near 0 counts as 0
    inside = lambda x: jd.spectral_values(x).min() >= -tol * scale
    plus = inside(u + v)
    minus_plus = inside(-(u + v))
    minus = inside(u - v)
    c1 = minus_plus and minus
    c2 = plus and minus
    if c1 and c2:
        return CayleyCone.BOTH
    if c1:
        return CayleyCone.C1
    if c2:
        return CayleyCone.C2
    return CayleyCone.NEITHER
