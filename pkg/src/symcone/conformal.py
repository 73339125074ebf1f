"""Conformal group of the bounded domain D and its lifts to the cover of S.

Matrix kinds only.  An element acts on the disk by
``z -> (Az + B)(Cz + D)^{-1}``.  The disk matrices are obtained from tube
matrices ``M`` (real symplectic for ``sym_real``, preserving the form
``[[0, I], [-I, 0]]`` under conjugate transpose for ``herm_complex``) by
conjugation with the Cayley matrix ``[[I, -iI], [I, iI]]``.

The Jacobian character is ``j(g, z) = Det((A - g(z) C)(Cz + D)^{-1})``, the
determinant of the derivative of g at z read as a structure map.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import boundary as bd
from . import jordan as jd
from .cone import symplectic_form
from .errors import BranchTrackingFailure, DomainError, NotImplementedForKind, SingularAction
from .jordan import Algebra, Element, Kind


def _require_matrix(alg: Algebra):
    if not alg.is_matrix:
        raise NotImplementedForKind("conformal maps are realized for matrix kinds only")


def _cayley_matrix(r: int) -> np.ndarray:
    i = np.eye(r)
    return np.block([[i, -1j * i], [i, 1j * i]])


class Conformal:
    """Linear fractional automorphism of the disk."""

    def __init__(self, alg: Algebra, matrix, check: bool = True):
        _require_matrix(alg)
        m = np.asarray(matrix, dtype=complex)
        r = alg.r
        if m.shape != (2 * r, 2 * r):
            raise DomainError(f"expected a {2 * r}x{2 * r} matrix")
        self.algebra = alg
        self.matrix = m
        if check:
            self._validate()

    def _validate(self, tol: float = 1e-8):
        r = self.algebra.r
        P = _cayley_matrix(r)
        mt = np.linalg.solve(P, self.matrix @ P)
        J = symplectic_form(r)
        scale = max(1.0, np.linalg.norm(mt) ** 2)
        if np.linalg.norm(mt.conj().T @ J @ mt - J) > tol * scale:
            raise DomainError("matrix does not preserve the disk")
        if self.algebra.kind is Kind.SYM_REAL and np.linalg.norm(mt.T @ J @ mt - J) > tol * scale:
            raise DomainError("matrix does not preserve symmetric matrices")

    @property
    def blocks(self):
        r = self.algebra.r
        m = self.matrix
        return m[:r, :r], m[:r, r:], m[r:, :r], m[r:, r:]

    def __matmul__(self, other: "Conformal") -> "Conformal":
        return Conformal(self.algebra, self.matrix @ other.matrix, check=False)

    def inverse(self) -> "Conformal":
        return Conformal(self.algebra, np.linalg.inv(self.matrix), check=False)

    def apply(self, z: Element) -> Element:
        A, B, C, D = self.blocks
        den = C @ z.data + D
        if np.linalg.cond(den) > 1e13:
            raise SingularAction("Cz + D is singular")
        out = np.linalg.solve(den.T, (A @ z.data + B).T).T
        return Element(self.algebra, out, is_complex=True)

    __call__ = apply

    def jacobian(self, z: Element) -> complex:
        """``j(g, z)``."""
        A, B, C, D = self.blocks
        den = C @ z.data + D
        gz = np.linalg.solve(den.T, (A @ z.data + B).T).T
        return complex(np.linalg.det((A - gz @ C) @ np.linalg.inv(den)))

    def is_unitary_part(self, tol: float = 1e-10) -> bool:
        """True when g fixes 0 (then g is a unitary structure map)."""
        _, B, C, _ = self.blocks
        return np.linalg.norm(B) <= tol and np.linalg.norm(C) <= tol


def from_tube(alg: Algebra, m) -> Conformal:
    """Transport a tube matrix to the disk."""
    _require_matrix(alg)
    P = _cayley_matrix(alg.r)
    return Conformal(alg, P @ np.asarray(m) @ np.linalg.inv(P))


def identity(alg: Algebra) -> Conformal:
    _require_matrix(alg)
    return Conformal(alg, np.eye(2 * alg.r))


def tube_translation(v: Element) -> Conformal:
    """Disk image of ``z -> z + v``; it fixes the boundary point e."""
    r = v.algebra.r
    m = np.block([[np.eye(r), v.data], [np.zeros((r, r)), np.eye(r)]])
    return from_tube(v.algebra, m)


def unitary(alg: Algebra, a, b=None) -> Conformal:
    """``z -> a z a^T`` (sym_real) or ``z -> a z b`` (herm_complex), a, b unitary."""
    _require_matrix(alg)
    a = np.asarray(a, dtype=complex)
    r = alg.r
    z = np.zeros((r, r))
    if alg.kind is Kind.SYM_REAL:
        lower = a.conj()
    else:
        b = a.conj().T if b is None else np.asarray(b, dtype=complex)
        lower = np.linalg.inv(b)
    return Conformal(alg, np.block([[a, z], [z, lower]]))


def rotation(alg: Algebra, alpha: float) -> Conformal:
    """``z -> exp(i alpha) z``."""
    _require_matrix(alg)
    r = alg.r
    z = np.zeros((r, r))
    h = np.exp(0.5j * alpha) * np.eye(r)
    return Conformal(alg, np.block([[h, z], [z, h.conj()]]))


def random_conformal(alg: Algebra, rng: np.random.Generator, scale: float = 0.5) -> Conformal:
    """``exp`` of a random tube Lie algebra element, transported to the disk."""
    _require_matrix(alg)
    k = 2 * alg.r
    h = rng.normal(size=(k, k))
    if alg.kind is Kind.HERM_COMPLEX:
        h = h + 1j * rng.normal(size=(k, k))
        h = (h + h.conj().T) / 2
    else:
        h = (h + h.T) / 2
    m = sla.expm(scale * symplectic_form(alg.r) @ h / np.sqrt(k))
    return from_tube(alg, m)


def random_unitary(alg: Algebra, rng: np.random.Generator) -> Conformal:
    from .sampling import random_orthogonal

    a = random_orthogonal(alg.r, rng, True)
    b = random_orthogonal(alg.r, rng, True) if alg.kind is Kind.HERM_COMPLEX else None
    return unitary(alg, a, b)


def character_chi(g: Conformal) -> complex:
    """``chi`` of a unitary part element (``det(g z) = chi(g) det z``)."""
    if not g.is_unitary_part():
        raise DomainError("chi is defined here on elements fixing 0")
    return g.jacobian(g.algebra.zero(is_complex=True))


def det_cocycle_check(g: Conformal, sigma: Element, tol: float = 1e-8) -> bool:
    """Check ``det(g sigma) = j(g, sigma)/|j(g, sigma)| det(sigma)``."""
    sigma = bd.check_boundary(sigma)
    jv = g.jacobian(sigma)
    lhs = complex(jd.det(g.apply(sigma)))
    rhs = jv / abs(jv) * complex(jd.det(sigma))
    return abs(lhs - rhs) <= tol


# ---------------------------------------------------------------------------
# lifts


def track_arg(f, z: Element, theta_start: float, max_step: float = np.pi / 4,
              min_dt: float = 1e-10) -> float:
    """Continue ``arg f(t z)`` from ``t = 0`` (value ``theta_start``) to ``t = 1``.

    The step in t is halved until the argument changes by less than
    ``max_step`` and doubled after each accepted step.
    """
    alg = z.algebra
    zero = alg.zero(is_complex=True)
    prev = f(zero)
    if abs(np.exp(1j * theta_start) - prev / abs(prev)) > 1e-6:
        raise DomainError("start angle does not match arg f(0)")
    t, val, dt = 0.0, theta_start, 0.25
    while t < 1.0:
        dt = min(dt, 1.0 - t)
        while True:
            cur = f(Element(alg, (t + dt) * z.data, True))
            step = float(np.angle(cur / prev))
            if abs(step) < max_step:
                break
            dt /= 2
            if dt < min_dt:
                raise BranchTrackingFailure("argument continuation failed")
        val += step
        t += dt
        prev = cur
        dt *= 2
    return val


@dataclass
class Lift:
    """Element ``(g, phi_g)`` of the cover group.

    ``theta0`` is the value of the argument determination at ``z = 0``.
    """

    g: Conformal
    theta0: float

    def __post_init__(self):
        j0 = self.g.jacobian(self.g.algebra.zero(is_complex=True))
        if abs(np.exp(1j * self.theta0) - j0 / abs(j0)) > 1e-6:
            raise DomainError("theta0 is not an argument of j(g, 0)")

    @property
    def algebra(self) -> Algebra:
        return self.g.algebra

    def phi(self, z: Element) -> float:
        return track_arg(self.g.jacobian, z.as_complex(), self.theta0)

    def act(self, p: bd.CoveringPoint) -> bd.CoveringPoint:
        s2 = self.g.apply(p.sigma)
        # re-project onto S to keep roundoff from accumulating over iterations
        s2 = _project_to_boundary(s2)
        return bd.CoveringPoint(s2, p.theta + self.phi(p.sigma) / self.algebra.r)

    __call__ = act

    def __matmul__(self, other: "Lift") -> "Lift":
        h0 = other.g.apply(other.algebra.zero(is_complex=True))
        return Lift(self.g @ other.g, self.phi(h0) + other.theta0)

    def inverse(self) -> "Lift":
        gi = self.g.inverse()
        z = gi.apply(self.algebra.zero(is_complex=True))
        return Lift(gi, -self.phi(z))

    def deck(self, k: int = 1) -> "Lift":
        """Compose with the deck transformation ``theta -> theta + 2 pi k / r``."""
        return Lift(self.g, self.theta0 + 2 * np.pi * k)


def principal_lift(g: Conformal) -> Lift:
    j0 = g.jacobian(g.algebra.zero(is_complex=True))
    return Lift(g, float(np.angle(j0)))


def identity_lift(alg: Algebra) -> Lift:
    return Lift(identity(alg), 0.0)


def rotation_lift(alg: Algebra, alpha: float) -> Lift:
    """Lift of ``z -> exp(i alpha) z`` acting by ``theta -> theta + alpha``."""
    return Lift(rotation(alg, alpha), alg.r * alpha)


def _project_to_boundary(s: Element) -> Element:
    # the unitary polar factor is the nearest point of S (symmetric if s is)
    u, _, vh = np.linalg.svd(s.data)
    return Element(s.algebra, u @ vh, True)
