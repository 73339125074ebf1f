"""J-contraction semigroups of Sp(r, R), SO*(2l) and U(p, q).

All three groups are realized as complex m x m matrices with the signature
``J = diag(-I_p, I_q)``:

============  ======  =====================================  ==============
group         m       complexified group G_C                 tube space V
============  ======  =====================================  ==============
Sp(r, R)      2r      ``g^T K g = K``, ``K = [[0, I], [-I, 0]]``  ``[[a, b], [conj b, conj a]]``
SO*(2l)       2l      ``g^T K g = K``, ``K = [[0, I], [I, 0]]``   ``[[a, b], [-conj b, conj a]]``
U(p, q)       p + q   GL(m, C)                               Herm(m)
============  ======  =====================================  ==============

In the tube column a is Hermitian and b is complex symmetric (Sp) or skew
(SO*).  The Cayley map ``C(Z) = (Z - iJ)(Z + iJ)^{-1}`` sends the tube
``V + i Omega`` off the singular set onto the interior of the semigroup
``{gamma : J - gamma^* J gamma >= 0}``.

Half-integer powers of determinants are carried by the double cover: a
lifted element is ``(gamma, w)`` with ``w^2 = Det(Z + iJ)^{-1}``.
"""
from __future__ import annotations

import enum
import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import (
    BadBound,
    BranchMismatch,
    BranchTrackingFailure,
    DomainError,
    NotInTube,
    NotInvertible,
    NotStrict,
    OnSingularSet,
    SingularDifference,
    SizeMismatch,
)


class GroupCompatibilityWarning(UserWarning):
    """A matrix violates the defining relation of the complexified group."""


class Grade(str, enum.Enum):
    STRICT = "Strict"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class GroupKind:
    """Group label with its matrix data.

    Attributes
    ----------
    group : {"sp", "so_star", "upq"}
    a, b : int
        ``(r, 0)`` for Sp(r, R), ``(l, 0)`` for SO*(2l), ``(p, q)`` for U(p, q).
    """

    group: str
    a: int
    b: int = 0

    def __post_init__(self):
        if self.group not in ("sp", "so_star", "upq"):
            raise DomainError(f"unknown group {self.group!r}")
        if self.group == "upq":
            if self.a < 0 or self.b < 0 or self.a + self.b < 1:
                raise DomainError("U(p, q) needs p, q >= 0 and p + q >= 1")
        elif self.a < 1:
            raise DomainError("rank must be positive")

    @property
    def p(self) -> int:
        return self.a if self.group == "upq" else self.a

    @property
    def q(self) -> int:
        return self.b if self.group == "upq" else self.a

    @property
    def m(self) -> int:
        return self.p + self.q

    @property
    def J(self) -> np.ndarray:
        return np.diag(np.concatenate([-np.ones(self.p), np.ones(self.q)]))

    @property
    def K(self) -> np.ndarray | None:
        """Bilinear form defining G_C, ``None`` for U(p, q)."""
        if self.group == "upq":
            return None
        r = self.a
        z, i = np.zeros((r, r)), np.eye(r)
        lower = -i if self.group == "sp" else i
        return np.block([[z, i], [lower, z]])

    @property
    def N(self) -> int:
        r = self.a
        return {"sp": r * (2 * r + 1), "so_star": r * (2 * r - 1), "upq": self.m ** 2}[self.group]

    @property
    def R(self) -> int:
        return {"sp": 2 * self.a, "so_star": self.a, "upq": self.m}[self.group]

    @property
    def hardy_parameter(self) -> Fraction:
        return Fraction(self.N, self.R)

    @property
    def det_power(self) -> Fraction:
        """Jordan determinant as a power of the matrix determinant."""
        return Fraction(1, 2) if self.group == "so_star" else Fraction(1)

    @property
    def kernel_exponent(self) -> Fraction:
        """Exponent of ``Det(J - gamma_2^* J gamma_1)`` in the Hardy kernel."""
        return self.hardy_parameter * self.det_power

    def label(self) -> str:
        if self.group == "sp":
            return f"Sp({self.a},R)"
        if self.group == "so_star":
            return f"SO*({2 * self.a})"
        return f"U({self.a},{self.b})"


def sp(r: int) -> GroupKind:
    return GroupKind("sp", r)


def so_star(l: int) -> GroupKind:
    return GroupKind("so_star", l)


def upq(p: int, q: int) -> GroupKind:
    return GroupKind("upq", p, q)


# ---------------------------------------------------------------------------
# semigroup elements


def _grade(kind: GroupKind, g: np.ndarray, tol: float) -> Grade:
    J = kind.J
    H = J - g.conj().T @ J @ g
    H = (H + H.conj().T) / 2
    ev = np.linalg.eigvalsh(H)
    scale = tol * max(1.0, np.linalg.norm(g, 2) ** 2)
    if ev.min() > scale:
        return Grade.STRICT
    if ev.min() >= -scale:
        return Grade.BOUNDARY
    return Grade.OUTSIDE


def group_defect(kind: GroupKind, g: np.ndarray) -> float:
    """``||g^T K g - K||`` relative to ``||g||^2`` (0 for U(p, q))."""
    K = kind.K
    if K is None:
        return 0.0
    return float(np.linalg.norm(g.T @ K @ g - K) / max(1.0, np.linalg.norm(g, 2) ** 2))


@dataclass
class SemigroupElement:
    """Matrix ``gamma`` with optional double-cover branch ``w``."""

    kind: GroupKind
    gamma: np.ndarray
    w: complex | None = None

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=complex)
        if g.shape != (self.kind.m, self.kind.m):
            raise SizeMismatch(f"{self.kind.label()} needs {self.kind.m}x{self.kind.m} matrices")
        self.gamma = g
        if self.w is not None:
            self.w = complex(self.w)

    @property
    def grade(self) -> Grade:
        return _grade(self.kind, self.gamma, 1e-9)

    def __matmul__(self, other: "SemigroupElement") -> "SemigroupElement":
        if self.w is not None and other.w is not None:
            return metaplectic_mul(self, other)
        return SemigroupElement(self.kind, self.gamma @ other.gamma)


def semigroup_membership(elem: SemigroupElement, tol: float = 1e-9) -> Grade:
    """Grade of ``J - gamma^* J gamma``; warns when gamma leaves G_C."""
    if group_defect(elem.kind, elem.gamma) > 1e-8:
        warnings.warn("matrix is not in the complexified group", GroupCompatibilityWarning, stacklevel=2)
    return _grade(elem.kind, elem.gamma, tol)


# ---------------------------------------------------------------------------
# tube points and the Cayley map


def _tube_defect(kind: GroupKind, Z: np.ndarray) -> float:
    K = kind.K
    if K is None:
        return 0.0
    S = K @ kind.J
    M = S @ Z
    sign = 1 if kind.group == "sp" else -1
    return float(np.linalg.norm(M - sign * M.T) / max(1.0, np.linalg.norm(Z)))


@dataclass
class TubePoint:
    """``Z = X + iY`` with X in V and Y positive definite."""

    kind: GroupKind
    Z: np.ndarray
    singular: bool = field(default=False, init=False)

    def __post_init__(self):
        Z = np.asarray(self.Z, dtype=complex)
        if Z.shape != (self.kind.m, self.kind.m):
            raise SizeMismatch(f"{self.kind.label()} needs {self.kind.m}x{self.kind.m} matrices")
        self.Z = Z
        if _tube_defect(self.kind, Z) > 1e-8:
            raise NotInTube("Z is not in the complexified tube space of this group")
        if np.linalg.eigvalsh(self.Y).min() <= 1e-12 * max(1.0, np.linalg.norm(Z)):
            raise NotInTube("imaginary part is not positive definite")
        W = Z + 1j * self.kind.J
        self.singular = bool(np.linalg.svd(W, compute_uv=False).min() <= 1e-12 * max(1.0, np.linalg.norm(Z)))

    @property
    def X(self) -> np.ndarray:
        return (self.Z + self.Z.conj().T) / 2

    @property
    def Y(self) -> np.ndarray:
        return (self.Z - self.Z.conj().T) / 2j


def _random_space_element(kind: GroupKind, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian element of V."""
    m = kind.m
    if kind.group == "upq":
        h = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        return (h + h.conj().T) / 2
    r = kind.a
    a = rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))
    a = (a + a.conj().T) / 2
    b = rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))
    if kind.group == "sp":
        b = (b + b.T) / 2
        return np.block([[a, b], [b.conj(), a.conj()]])
    b = (b - b.T) / 2
    return np.block([[a, b], [-b.conj(), a.conj()]])


def random_tube_point(kind: GroupKind, rng: np.random.Generator, scale: float = 1.0) -> TubePoint:
    """``X + iY`` with X in V and ``Y = M o M + I/2`` (squares lie in the cone)."""
    X = _random_space_element(kind, rng) * scale
    M = _random_space_element(kind, rng) * scale
    Y = M @ M + 0.5 * np.eye(kind.m)
    return TubePoint(kind, X + 1j * Y)


def cayley_C(Z: TubePoint, with_branch: bool = False) -> SemigroupElement:
    """``C(Z) = (Z - iJ)(Z + iJ)^{-1}``.

    With ``with_branch=True`` the element carries the principal square root
    ``w`` of ``Det(Z + iJ)^{-1}``.
    """
    kind = Z.kind
    if Z.singular:
        raise OnSingularSet("Det(Z + iJ) = 0")
    iJ = 1j * kind.J
    W = Z.Z + iJ
    g = np.linalg.solve(W.T, (Z.Z - iJ).T).T
    w = np.sqrt(1 / np.linalg.det(W)) if with_branch else None
    return SemigroupElement(kind, g, w)


def cayley_C_inverse(elem: SemigroupElement) -> TubePoint:
    """``Z = 2 (I - gamma)^{-1} iJ - iJ``."""
    kind = elem.kind
    A = np.eye(kind.m) - elem.gamma
    if np.linalg.svd(A, compute_uv=False).min() <= 1e-12 * max(1.0, np.linalg.norm(elem.gamma)):
        raise NotInvertible("I - gamma is singular")
    iJ = 1j * kind.J
    Z = 2 * np.linalg.solve(A, iJ) - iJ
    return TubePoint(kind, Z)


# ---------------------------------------------------------------------------
# determinant branches


def logdet_right_half(M: np.ndarray) -> complex:
    """Continuous ``log Det M`` on matrices with positive definite Hermitian part.

    Such matrices have spectrum in the right half plane and the set is convex
    and contains I, so summing principal logs of eigenvalues is the branch
    continued from ``log Det I = 0``.
    """
    H = (M + M.conj().T) / 2
    if np.linalg.eigvalsh(H).min() <= 0:
        raise BranchTrackingFailure("Hermitian part is not positive definite")
    return complex(np.sum(np.log(np.linalg.eigvals(M))))


def _power(z: complex, e: Fraction) -> complex:
    if Fraction(e).denominator == 1:
        return complex(z) ** int(e)
    return complex(np.exp(float(e) * np.log(complex(z))))


def szego_kernel_tube(Z, W, lam: float | None = None, kind: GroupKind | None = None) -> complex:
    """``det((Z - W^*)/2i)^{-lam}`` on the tube.

    Parameters
    ----------
    Z, W : TubePoint or ndarray
    lam : float, optional
        Defaults to the Hardy parameter ``N/R`` of the kind.
    kind : GroupKind, optional
        Fixes the Jordan determinant convention (``Det^{1/2}`` for SO*).
        Taken from Z when Z is a TubePoint; plain ``Det`` otherwise.
    """
    if isinstance(Z, TubePoint):
        kind = kind or Z.kind
        Z = Z.Z
    if isinstance(W, TubePoint):
        W = W.Z
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    if Z.shape != W.shape:
        raise SizeMismatch("Z and W differ in size")
    if lam is None:
        if kind is None:
            raise DomainError("lam is required without a group kind")
        lam = float(kind.hardy_parameter)
    power = float(kind.det_power) if kind is not None else 1.0
    M = (Z - W.conj().T) / 2j
    if np.linalg.svd(M, compute_uv=False).min() <= 1e-14 * max(1.0, np.linalg.norm(M)):
        raise SingularDifference("(Z - W^*)/2i is singular")
    return complex(np.exp(-lam * power * logdet_right_half(M)))


def _require_strict(*elems: SemigroupElement):
    for e in elems:
        if e.grade is not Grade.STRICT:
            raise NotStrict("element is not in the open semigroup")


def szego_kernel_semigroup(g1: SemigroupElement, g2: SemigroupElement) -> complex:
    """Hardy kernel ``Det(J - gamma_2^* J gamma_1)^{-e}`` on the open semigroup.

    The exponent e is ``r + 1/2`` (Sp), ``l - 1/2`` (SO*) or ``n`` (U(p, q)).
    Half-integer powers use the branch values carried by the two elements::

        Det(J - g2^* J g1)^{1/2} = 2^m w1 conj(w2) Det((Z1 - Z2^*)/2i)^{1/2}

    where ``g_i = C(Z_i)`` and the last root is the continuous branch.
    """
    if g1.kind != g2.kind:
        raise SizeMismatch("elements belong to different groups")
    _require_strict(g1, g2)
    kind = g1.kind
    J = kind.J
    D = np.linalg.det(J - g2.gamma.conj().T @ J @ g1.gamma)
    e = kind.kernel_exponent
    if e.denominator == 1:
        return complex(D) ** (-int(e))
    return _half_power_root(g1, g2, D) ** (-int(2 * e))


def _half_power_root(g1: SemigroupElement, g2: SemigroupElement, D: complex) -> complex:
    """Square root of ``D = Det(J - g2^* J g1)`` fixed by the branch values."""
    if g1.w is None or g2.w is None:
        raise BranchMismatch("half-integer kernels need elements carrying w")
    Z1 = cayley_C_inverse(g1).Z
    Z2 = cayley_C_inverse(g2).Z
    m = g1.kind.m
    root = 2.0 ** m * g1.w * np.conj(g2.w) * np.exp(0.5 * logdet_right_half((Z1 - Z2.conj().T) / 2j))
    if abs(root * root - D) > 1e-6 * max(1.0, abs(D)):
        raise BranchMismatch("branch values are inconsistent with the matrices")
    return complex(root)


def bergman_kernel(g1: SemigroupElement, g2: SemigroupElement) -> complex:
    """``Det(J - gamma_2^* J gamma_1)^{-(2r + 1)}`` for Sp(r, R)."""
    if g1.kind.group != "sp":
        raise DomainError("the Bergman relation is implemented for Sp(r, R)")
    _require_strict(g1, g2)
    J = g1.kind.J
    D = np.linalg.det(J - g2.gamma.conj().T @ J @ g1.gamma)
    return complex(D) ** (-(2 * g1.kind.a + 1))


def transport_constant(kind: GroupKind) -> float:
    """c in ``Det(Z+iJ)^{-e} conj(Det(W+iJ))^{-e} K(C(Z), C(W)) = c K_tube(Z, W)``."""
    return float(4.0 ** (-kind.m * float(kind.kernel_exponent)))


# ---------------------------------------------------------------------------
# double cover


def lift_principal(elem: SemigroupElement) -> SemigroupElement:
    """Attach the principal root ``w`` of ``Det(Z + iJ)^{-1}``."""
    Z = cayley_C_inverse(elem).Z
    w = np.sqrt(1 / np.linalg.det(Z + 1j * elem.kind.J))
    return SemigroupElement(elem.kind, elem.gamma, complex(w))


def identity_approximant(kind: GroupKind, t: float) -> SemigroupElement:
    """``(exp(-tJ), w_t)`` with ``w_t = (2i)^{-m/2} Det(D_t)^{-1/2}``, ``D_t > 0``.

    These elements form a one-parameter sub-semigroup of the cover that
    tends to the neutral element as ``t -> 0+``.
    """
    if t <= 0:
        raise DomainError("t must be positive")
    p, q, m = kind.p, kind.q, kind.m
    g = np.diag(np.concatenate([np.full(p, np.exp(t)), np.full(q, np.exp(-t))]))
    logdet_D = -p * np.log(np.expm1(t)) - q * np.log(-np.expm1(-t))
    w = np.exp(-0.5 * logdet_D) * 2.0 ** (-m / 2) * np.exp(-1j * np.pi * m / 4)
    return SemigroupElement(kind, g, complex(w))


def branch_defect(elem: SemigroupElement) -> float:
    """``|w^2 Det(Z + iJ) - 1|``."""
    Z = cayley_C_inverse(elem).Z
    return float(abs(elem.w ** 2 * np.linalg.det(Z + 1j * elem.kind.J) - 1))


def metaplectic_mul(a: SemigroupElement, b: SemigroupElement) -> SemigroupElement:
    """Product in the double cover.

    ``w_ab = (2i)^{m/2} w_a w_b Det((Z_a + Z_b)/2i)^{1/2}``, the root being
    the continuous branch on matrices with positive Hermitian part.  This
    is the analytic continuation of the product over the (connected) open
    semigroup, pinned down at the identity limit.
    """
    if a.kind != b.kind:
        raise SizeMismatch("elements belong to different groups")
    if a.w is None or b.w is None:
        raise BranchMismatch("both factors need branch values")
    _require_strict(a, b)
    kind = a.kind
    m = kind.m
    Za = cayley_C_inverse(a).Z
    Zb = cayley_C_inverse(b).Z
    root = np.exp(0.5 * logdet_right_half((Za + Zb) / 2j))
    w = 2.0 ** (m / 2) * np.exp(1j * np.pi * m / 4) * a.w * b.w * root
    out = SemigroupElement(kind, a.gamma @ b.gamma, complex(w))
    if branch_defect(out) > 1e-6:
        raise BranchTrackingFailure("product branch is inconsistent")
    return out


def intertwiner_pullback(F: Callable[[SemigroupElement], complex], kind: GroupKind,
                         p: float | Fraction | None = None) -> Callable[[TubePoint], complex]:
    """``f(Z) = Det(Z + iJ)^{-p} F(C(Z))``.

    p defaults to the kind's kernel exponent.  For half-integer p the
    factor is ``w^{2p}`` with the principal w, and F receives the lifted
    element ``(C(Z), w)``.
    """
    p = kind.kernel_exponent if p is None else Fraction(p).limit_denominator(1000)

    def f(Z: TubePoint) -> complex:
        if not isinstance(Z, TubePoint):
            Z = TubePoint(kind, Z)
        g = cayley_C(Z, with_branch=True)
        dW = np.linalg.det(Z.Z + 1j * kind.J)
        if p.denominator == 1:
            fac = complex(dW) ** (-int(p))
        elif p.denominator == 2:
            fac = g.w ** int(2 * p)
        else:
            fac = np.exp(-float(p) * np.log(complex(dW)))
        return complex(fac * F(g))

    return f


# ---------------------------------------------------------------------------
# highest weights


@dataclass(frozen=True)
class HighestWeight:
    """Weight ``lam`` (tuple of Fractions), optional central charge k."""

    lam: tuple
    is_half: bool
    k: int | None = None
    assumption: str | None = None

    def twice(self) -> list[int]:
        return [int(2 * x) for x in self.lam]


def _decreasing(values, n):
    """Non-increasing n-tuples drawn from ``values`` (sorted descending)."""
    return itertools.combinations_with_replacement(values, n)


def weight_enumerate(kind: GroupKind, bound: int, parity: str = "odd",
                     bracket: str = "sum") -> list[HighestWeight]:
    """Finite list of highest weights with every ``|lam_i| <= bound``.

    Parameters
    ----------
    kind : GroupKind
    bound : int
        Cap on ``|lam_i|``.
    parity : {"odd", "even"}
        Half-integer (double cover) or integer weights; ignored for U(p, q).
    bracket : {"sum"}
        Reading of ``[lam]`` in the U(p, q) condition (sum of entries).
    """
    if bound < 0 or int(bound) != bound:
        raise BadBound("bound must be a non-negative integer")
    if parity not in ("odd", "even"):
        raise DomainError("parity is 'odd' or 'even'")
    half = Fraction(1, 2)
    out: list[HighestWeight] = []
    if kind.group == "upq":
        if bracket != "sum":
            raise DomainError("only the 'sum' reading of [lam] is implemented")
        p, q, n = kind.p, kind.q, kind.m
        neg = list(range(0, -bound - 1, -1))
        pos = list(range(bound, -1, -1))
        for a in _decreasing(neg, p):
            for b in _decreasing(pos, q):
                lam = a + b
                if not lam[-1] - lam[0] > n - 1:
                    continue
                s = sum(lam)
                for k in range(s - n * lam[-1], s - n * lam[0] + 1):
                    out.append(HighestWeight(tuple(Fraction(x) for x in lam), False, k, "[lam]=sum"))
        return out
    r = kind.a
    if parity == "odd":
        values = [Fraction(-j) - half for j in range(0, bound)]
        values = [v for v in values if abs(v) <= bound]
    else:
        values = [Fraction(-j) for j in range(-bound, bound + 1)]
        values.sort(reverse=True)
    for lam in _decreasing(values, r):
        if kind.group == "sp":
            ok = lam[0] <= -(r + half) if parity == "odd" else lam[0] < -r
        else:
            if r < 2:
                raise DomainError("SO*(2l) weights need l >= 2")
            if parity == "odd":
                ok = lam[0] <= 0 and lam[0] + lam[1] <= -2 * r + 2
            else:
                ok = lam[0] + lam[1] < -2 * r + 3
        if ok:
            out.append(HighestWeight(tuple(lam), parity == "odd"))
    return out
