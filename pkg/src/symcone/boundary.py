"""Complexification, the Shilov boundary S, Cayley transforms and the cover of S.

A point of S is an element ``sigma = sum xi_j c_j`` of V_C with a real
Jordan frame and unimodular ``xi_j``; equivalently ``sigma^{-1} = conj(sigma)``.
For matrix kinds the ``xi_j`` are the matrix eigenvalues of sigma, which is a
normal matrix, so functions of sigma are computed from a complex Schur form.

Unitary structure maps are stored as complex n x n operator matrices on the
complex coordinates (see :mod:`symcone.jordan`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla

from . import jordan as jd
from .errors import (
    BadFrame,
    DomainError,
    FactorizationFailure,
    NotOnBoundary,
    NotTransversalToMinusE,
    NumericalFailure,
    SingularArgument,
)
from .jordan import Algebra, Element, Kind

BOUNDARY_TOL = 1e-8


def principal_angle(xi) -> np.ndarray:
    """Argument in (-pi, pi]; values within 1e-12 of -pi are mapped to pi."""
    a = np.angle(np.asarray(xi, dtype=complex))
    return np.where(a <= -np.pi + 1e-12, np.pi, a)


# ---------------------------------------------------------------------------
# spectral calculus on normal elements of V_C


def normal_spectrum(z: Element) -> np.ndarray:
    """Spectral values of a normal element of V_C (e.g. a point of S)."""
    if z.algebra.is_matrix:
        return np.linalg.eigvals(z.data.astype(complex))
    t = complex(z.data[0])
    dt = complex(jd.det(z.as_complex()))
    s = np.sqrt(t * t - dt)
    return np.array([t + s, t - s])


def normal_funcalc(z: Element, f: Callable) -> Element:
    """``sum f(xi_j) c_j`` for a normal element z of V_C."""
    alg = z.algebra
    if alg.is_matrix:
        T, Z = sla.schur(z.data.astype(complex), output="complex")
        xi = np.diag(T)
        off = np.linalg.norm(T - np.diag(xi))
        if off > 1e-7 * max(1.0, np.linalg.norm(T)):
            raise NumericalFailure("element is not normal")
        fx = np.array([f(x) for x in xi], dtype=complex)
        return Element(alg, (Z * fx) @ Z.conj().T, is_complex=True)
    xi = normal_spectrum(z)
    e = alg.unit()
    if abs(xi[0] - xi[1]) < 1e-9:
        return complex(f(xi[0])) * e.as_complex()
    c1 = (z.as_complex() - complex(xi[1]) * e) / complex(xi[0] - xi[1])
    c2 = e.as_complex() - c1
    return complex(f(xi[0])) * c1 + complex(f(xi[1])) * c2


# ---------------------------------------------------------------------------
# the Shilov boundary


def boundary_residual(z: Element) -> float:
    """``||z^{-1} - conj(z)||``, infinite for singular z."""
    try:
        inv = jd.inverse(z.as_complex())
    except DomainError:
        return float("inf")
    return (inv - z.conj().as_complex()).norm()


def is_boundary(z: Element, tol: float = BOUNDARY_TOL) -> bool:
    return boundary_residual(z) <= tol * max(1.0, z.norm())


def check_boundary(z: Element, tol: float = BOUNDARY_TOL) -> Element:
    if not is_boundary(z, tol):
        raise NotOnBoundary("element is not on the Shilov boundary")
    return z.as_complex()


def check_frame(frame: Sequence[Element], tol: float = 1e-8) -> None:
    if not frame:
        raise BadFrame("empty frame")
    alg = frame[0].algebra
    if len(frame) != alg.r:
        raise BadFrame(f"a frame has {alg.r} elements")
    e = alg.unit()
    for c in frame:
        if c.algebra != alg or c.is_complex:
            raise BadFrame("frame elements must be real elements of one algebra")
        if (jd.square(c) - c).norm() > tol or abs(jd.trace(c) - 1) > tol:
            raise BadFrame("frame element is not a primitive idempotent")
    for i, a in enumerate(frame):
        for b in frame[i + 1:]:
            if jd.product(a, b).norm() > tol:
                raise BadFrame("frame elements are not orthogonal")
    if (sum(frame[1:], frame[0]) - e).norm() > tol:
        raise BadFrame("frame does not sum to the unit")


def boundary_from_angles(frame: Sequence[Element], angles) -> Element:
    """``sigma = sum exp(i theta_j) c_j``."""
    check_frame(frame)
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (len(frame),):
        raise BadFrame("one angle per frame element is required")
    alg = frame[0].algebra
    out = alg.zero(is_complex=True)
    for th, c in zip(angles, frame):
        out = out + complex(np.exp(1j * th)) * c
    return out


def boundary_angles(sigma: Element) -> np.ndarray:
    """Principal angles of the spectral values, sorted descending."""
    return np.sort(principal_angle(normal_spectrum(sigma)))[::-1]


def random_boundary_point(alg: Algebra, rng: np.random.Generator) -> Element:
    from .sampling import random_frame

    return boundary_from_angles(random_frame(alg, rng), rng.uniform(-np.pi, np.pi, alg.r))


# ---------------------------------------------------------------------------
# disk, Cayley transforms, transversality


def spectral_norm(z: Element) -> float:
    """Largest singular-type value of z."""
    if z.algebra.is_matrix:
        return float(np.linalg.norm(z.data, 2))
    t, v = z.data[0], z.data[1:]
    s = abs(t) ** 2 + np.vdot(v, v).real
    dz = abs(t * t - v @ v)
    disc = max(s * s - dz * dz, 0.0)
    return float(np.sqrt(s + np.sqrt(disc)))


def disk_membership(z: Element) -> bool:
    return spectral_norm(z) < 1


def bergman_operator(z: Element) -> np.ndarray:
    """``B(z, conj z) = I - 2 z box conj(z) + P(z) P(conj z)``."""
    zc = z.as_complex()
    w = zc.conj()
    return np.eye(z.algebra.n) - 2 * jd.box(zc, w) + jd.quad_rep(zc) @ jd.quad_rep(w)


def cayley_p(z: Element) -> Element:
    """``p(z) = (z - ie)(z + ie)^{-1}``, tube to disk."""
    e = z.algebra.unit().as_complex()
    z = z.as_complex()
    try:
        inv = jd.inverse(z + 1j * e)
    except DomainError as exc:
        raise SingularArgument("z + ie is not invertible") from exc
    return jd.product(z - 1j * e, inv)


def cayley_c(w: Element) -> Element:
    """``c(w) = i(e + w)(e - w)^{-1}``, disk to tube."""
    e = w.algebra.unit().as_complex()
    w = w.as_complex()
    try:
        inv = jd.inverse(e - w)
    except DomainError as exc:
        raise SingularArgument("e - w is not invertible") from exc
    return 1j * jd.product(e + w, inv)


def transversal(z: Element, w: Element, tol: float = 1e-10) -> bool:
    """``det(z - w) != 0`` up to a relative tolerance."""
    diff = z.as_complex() - w.as_complex()
    scale = max(1.0, z.norm(), w.norm()) ** z.algebra.r
    return abs(jd.det(diff)) > tol * scale


# ---------------------------------------------------------------------------
# logarithm


def principal_log(sigma: Element, tol: float = 1e-9) -> Element:
    """``log sigma = sum i theta_j c_j`` with angles in (-pi, pi)."""
    sigma = check_boundary(sigma)
    xi = normal_spectrum(sigma)
    if np.any(np.abs(xi + 1) < tol):
        raise NotTransversalToMinusE("sigma has a spectral value -1")
    return normal_funcalc(sigma, lambda x: 1j * np.angle(x))


def boundary_exp(u: Element) -> Element:
    """``exp(i u)`` for a real element u."""
    return jd.funcalc(u, lambda t: np.exp(1j * t)).as_complex()


# ---------------------------------------------------------------------------
# unitary structure maps


@dataclass(frozen=True)
class StructureMap:
    """Complex-linear map of V_C given by its operator matrix."""

    algebra: Algebra
    op: np.ndarray

    def apply(self, z: Element) -> Element:
        return jd.apply_op(self.op, z.as_complex()).as_complex()

    __call__ = apply

    def __matmul__(self, other: "StructureMap") -> "StructureMap":
        return StructureMap(self.algebra, self.op @ other.op)

    def inverse(self) -> "StructureMap":
        return StructureMap(self.algebra, np.linalg.inv(self.op))

    def is_unitary(self, tol: float = 1e-8) -> bool:
        return np.linalg.norm(self.op.conj().T @ self.op - np.eye(self.algebra.n)) <= tol


def identity_map(alg: Algebra) -> StructureMap:
    return StructureMap(alg, np.eye(alg.n, dtype=complex))


def quad_map(w: Element) -> StructureMap:
    """``z -> P(w) z``; unitary when w lies on S."""
    return StructureMap(w.algebra, jd.quad_rep(w.as_complex()).astype(complex))


def scalar_map(alg: Algebra, s: complex) -> StructureMap:
    return StructureMap(alg, complex(s) * np.eye(alg.n, dtype=complex))


def matrix_map(alg: Algebra, a, b=None) -> StructureMap:
    """``z -> a z b`` (``b = a^T`` for ``sym_real``)."""
    if not alg.is_matrix:
        from .errors import NotImplementedForKind

        raise NotImplementedForKind("matrix_map needs a matrix algebra")
    a = np.asarray(a, dtype=complex)
    if b is None or alg.kind is Kind.SYM_REAL:
        b = a.T
    b = np.asarray(b, dtype=complex)
    cols = [Element(alg, a @ bk.data @ b, True).coords() for bk in alg.basis()]
    return StructureMap(alg, np.array(cols).T)


def character_chi(g: StructureMap) -> complex:
    """``chi(g) = det(g e)`` so that ``det(g z) = chi(g) det(z)``."""
    return complex(jd.det(g.apply(g.algebra.unit())))


def normalize_to_minus_e(tau: Element, branch: str = "principal") -> StructureMap:
    """Unitary structure map u with ``u(tau) = -e``.

    ``u = P(i tau^{-1/2})``.  The square root uses principal half angles
    (``branch="principal"``) or half angles of angles taken in [0, 2 pi)
    (``branch="alternate"``); the two choices differ by a stabilizer
    element, which gives an independent second normalizer.
    """
    tau = check_boundary(tau)
    if branch == "principal":
        half = lambda x: np.exp(-0.5j * principal_angle(x))
    elif branch == "alternate":
        half = lambda x: np.exp(-0.5j * np.mod(np.angle(x), 2 * np.pi))
    else:
        raise DomainError(f"unknown branch {branch!r}")
    w = 1j * normal_funcalc(tau, lambda x: complex(half(x)))
    u = quad_map(w)
    if (u.apply(tau) + tau.algebra.unit()).norm() > 1e-8:
        raise FactorizationFailure("normalizer residual too large")
    return u


# ---------------------------------------------------------------------------
# universal covering


@dataclass(frozen=True)
class CoveringPoint:
    """``(sigma, theta)`` with ``det(sigma) = exp(i r theta)``."""

    sigma: Element
    theta: float

    def __post_init__(self):
        s = check_boundary(self.sigma)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "theta", float(self.theta))
        r = s.algebra.r
        if abs(complex(jd.det(s)) - np.exp(1j * r * self.theta)) > 1e-7:
            raise DomainError("det(sigma) != exp(i r theta)")

    @property
    def algebra(self) -> Algebra:
        return self.sigma.algebra

    def deck(self, k: int = 1) -> "CoveringPoint":
        """Deck transformation ``theta -> theta + 2 pi k / r``."""
        return CoveringPoint(self.sigma, self.theta + 2 * np.pi * k / self.algebra.r)


def lift(sigma: Element, k: int = 0) -> CoveringPoint:
    """Lift with ``theta = arg(det sigma)/r + 2 pi k / r``."""
    sigma = check_boundary(sigma)
    r = sigma.algebra.r
    th = float(np.angle(complex(jd.det(sigma)))) / r + 2 * np.pi * k / r
    return CoveringPoint(sigma, th)


def covering_from_angles(frame, angles) -> CoveringPoint:
    """Point ``(sum exp(i theta_j) c_j, mean(theta))``."""
    angles = np.asarray(angles, dtype=float)
    return CoveringPoint(boundary_from_angles(frame, angles), float(angles.mean()))
