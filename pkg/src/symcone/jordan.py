"""Simple Euclidean Jordan algebras and their complexifications.

Three families are supported:

* ``sym_real``: real symmetric r x r matrices, product ``(xy + yx)/2``;
* ``herm_complex``: complex Hermitian r x r matrices, same product;
* ``spin``: the spin factor R x R^(q-1) with
  ``(t, v) o (s, w) = (ts + <v, w>, tw + sv)``.

Elements of the complexification V_C are stored in the same container
with ``is_complex=True``.  For ``sym_real`` this is Sym(r, C), for
``herm_complex`` it is the full matrix space Mat(r, C), and for ``spin`` it
is C x C^(q-1).

Linear operators on V (or V_C) are dense n x n arrays acting on the
coordinates of an element in a fixed basis that is orthonormal for the
trace form ``(x|y) = tr(x o y)``:

* ``sym_real``: ``E_ii`` then ``(E_ij + E_ji)/sqrt(2)`` for i < j;
* ``herm_complex``: ``E_ii``, then for each i < j the pair
  ``(E_ij + E_ji)/sqrt(2)`` and ``i(E_ij - E_ji)/sqrt(2)``;
* ``spin``: ``e_k / sqrt(2)``.

The complex coordinates of z in V_C use the bilinear extension
``c_k = (z | b_k)``, so a real operator matrix is automatically the complex
linear extension of its real counterpart.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AlgebraMismatch,
    DomainError,
    InvalidSize,
    NotIdempotent,
    NumericalFailure,
    SingularElement,
)

TOL = 1e-10
SQRT2 = np.sqrt(2.0)


class Kind(str, enum.Enum):
    SYM_REAL = "sym_real"
    HERM_COMPLEX = "herm_complex"
    SPIN = "spin"


class ConeClass(str, enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    EXTERIOR = "Exterior"


@dataclass(frozen=True)
class Algebra:
    """Descriptor of a simple Euclidean Jordan algebra.

    Attributes
    ----------
    kind : Kind
    r : int
        Rank.
    n : int
        Real dimension.
    d : int
        Peirce invariant.
    q : int or None
        Spin factor dimension (``n == q``), ``None`` for matrix kinds.
    """

    kind: Kind
    r: int
    n: int
    d: int
    q: int | None = None

    @property
    def is_matrix(self) -> bool:
        return self.kind is not Kind.SPIN

    @property
    def shape(self) -> tuple:
        return (self.r, self.r) if self.is_matrix else (self.q,)

    def unit(self) -> "Element":
        if self.is_matrix:
            return Element(self, np.eye(self.r))
        data = np.zeros(self.q)
        data[0] = 1.0
        return Element(self, data)

    def zero(self, is_complex: bool = False) -> "Element":
        dtype = complex if (is_complex or self.kind is Kind.HERM_COMPLEX) else float
        return Element(self, np.zeros(self.shape, dtype=dtype), is_complex=is_complex)

    def basis(self) -> list["Element"]:
        return [Element(self, b) for b in _basis(self)[0]]

    def from_coords(self, c, is_complex: bool | None = None) -> "Element":
        """Element with coordinates ``c`` in the orthonormal basis."""
        c = np.asarray(c)
        if c.shape != (self.n,):
            raise AlgebraMismatch(f"expected {self.n} coordinates, got shape {c.shape}")
        if is_complex is None:
            is_complex = np.iscomplexobj(c) and bool(np.any(c.imag != 0))
        mats = _basis(self)[1]
        if not is_complex:
            c = c.real
        data = c @ mats
        return Element(self, data.reshape(self.shape), is_complex=is_complex)


def make_algebra(kind, size: int) -> Algebra:
    """Build an algebra descriptor.

    Parameters
    ----------
    kind : Kind or str
        One of ``sym_real``, ``herm_complex``, ``spin``.
    size : int
        Matrix size r for matrix kinds, q for the spin factor.
    """
    kind = Kind(kind)
    size = int(size)
    if kind is Kind.SPIN:
        if size < 3:
            raise InvalidSize("spin factor needs q >= 3")
        return Algebra(kind, 2, size, size - 2, size)
    if size < 1:
        raise InvalidSize("matrix size must be >= 1")
    if kind is Kind.SYM_REAL:
        return Algebra(kind, size, size * (size + 1) // 2, 1)
    return Algebra(kind, size, size * size, 2)


@functools.lru_cache(maxsize=None)
def _basis(alg: Algebra):
    """Return (basis stack, flattened stack, flattened transposed stack)."""
    if alg.kind is Kind.SPIN:
        b = np.eye(alg.q) / SQRT2
        t = np.eye(alg.q) * SQRT2
        b.setflags(write=False)
        t.setflags(write=False)
        return b, b, t
    r = alg.r
    cplx = alg.kind is Kind.HERM_COMPLEX
    dtype = complex if cplx else float
    out = []
    for i in range(r):
        m = np.zeros((r, r), dtype=dtype)
        m[i, i] = 1.0
        out.append(m)
    for i in range(r):
        for j in range(i + 1, r):
            m = np.zeros((r, r), dtype=dtype)
            m[i, j] = m[j, i] = 1 / SQRT2
            out.append(m)
            if cplx:
                m = np.zeros((r, r), dtype=dtype)
                m[i, j] = 1j / SQRT2
                m[j, i] = -1j / SQRT2
                out.append(m)
    stack = np.array(out)
    flat = stack.reshape(alg.n, r * r)
    flat_t = stack.transpose(0, 2, 1).reshape(alg.n, r * r)
    for a in (stack, flat, flat_t):
        a.setflags(write=False)
    return stack, flat, flat_t


class Element:
    """Point of V (``is_complex=False``) or of V_C (``is_complex=True``).

    Real matrix elements are stored symmetric (Hermitian), complex
    ``sym_real`` elements are stored complex symmetric.  Storage is
    symmetrized on construction so that the invariant holds bit-exactly.
    """

    __slots__ = ("algebra", "data", "is_complex")

    def __init__(self, algebra: Algebra, data, is_complex: bool = False):
        kind = algebra.kind
        is_complex = bool(is_complex)
        arr = np.asarray(data)
        if arr.shape != algebra.shape:
            raise AlgebraMismatch(f"data shape {arr.shape} does not match {algebra.shape}")
        if kind is Kind.HERM_COMPLEX or is_complex:
            arr = arr.astype(complex)
        else:
            if np.iscomplexobj(arr):
                if np.any(np.abs(arr.imag) > 1e-12 * max(1.0, np.abs(arr).max())):
                    raise DomainError("real element has non-zero imaginary part")
                arr = arr.real
            arr = arr.astype(float)
        if kind is Kind.SYM_REAL:
            arr = _symmetrize(arr, arr.T)
        elif kind is Kind.HERM_COMPLEX and not is_complex:
            arr = _symmetrize(arr, arr.conj().T)
        arr = np.array(arr, copy=True)
        arr.setflags(write=False)
        self.algebra = algebra
        self.data = arr
        self.is_complex = is_complex

    def __repr__(self):
        tag = "complex " if self.is_complex else ""
        return f"Element({self.algebra.kind.value}, r={self.algebra.r}, {tag}data={self.data.tolist()})"

    # linear structure
    def _wrap(self, data, is_complex=None):
        return Element(self.algebra, data, self.is_complex if is_complex is None else is_complex)

    def __add__(self, other: "Element") -> "Element":
        _same(self, other)
        return self._wrap(self.data + other.data, self.is_complex or other.is_complex)

    def __sub__(self, other: "Element") -> "Element":
        _same(self, other)
        return self._wrap(self.data - other.data, self.is_complex or other.is_complex)

    def __neg__(self) -> "Element":
        return self._wrap(-self.data)

    def __mul__(self, s) -> "Element":
        if isinstance(s, Element):
            raise TypeError("use product() for the Jordan product")
        cplx = self.is_complex or (isinstance(s, complex) and s.imag != 0)
        return self._wrap(self.data * s, cplx)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "Element":
        return self * (1 / s)

    def coords(self) -> np.ndarray:
        """Coordinates in the orthonormal basis (real for real elements)."""
        _, _, flat_t = _basis(self.algebra)
        c = flat_t @ self.data.reshape(-1) if self.algebra.is_matrix else flat_t @ self.data
        return c if self.is_complex else np.real(c)

    def conj(self) -> "Element":
        """Conjugation of V_C with respect to the real form V."""
        if self.algebra.kind is Kind.HERM_COMPLEX:
            return self._wrap(self.data.conj().T)
        return self._wrap(np.conj(self.data))

    def as_complex(self) -> "Element":
        return self if self.is_complex else Element(self.algebra, self.data, True)

    def real_part(self) -> "Element":
        """Real part with respect to the real form V."""
        return Element(self.algebra, (self + self.conj()).data / 2)

    def imag_part(self) -> "Element":
        return Element(self.algebra, ((self - self.conj()).data / 2j))

    def norm(self) -> float:
        """Norm from the Hermitian form tr(z o conj(z))."""
        return float(np.linalg.norm(self.coords()))


def _symmetrize(a, at):
    return (a + at) / 2


def _same(x: Element, y: Element):
    if x.algebra != y.algebra:
        raise AlgebraMismatch(f"{x.algebra} vs {y.algebra}")


def element(alg: Algebra, data, is_complex: bool = False) -> Element:
    return Element(alg, data, is_complex)


def spin_element(q_or_alg, t, v, is_complex: bool = False) -> Element:
    alg = q_or_alg if isinstance(q_or_alg, Algebra) else make_algebra(Kind.SPIN, q_or_alg)
    return Element(alg, np.concatenate([[t], np.asarray(v)]), is_complex)


# ---------------------------------------------------------------------------
# products and operators


def _prod_data(kind: Kind, a, b):
    if kind is Kind.SPIN:
        t, v = a[0], a[1:]
        s, w = b[0], b[1:]
        return np.concatenate([[t * s + v @ w], t * w + s * v])
    return (a @ b + b @ a) / 2


def product(x: Element, y: Element) -> Element:
    """Jordan product ``x o y`` (bilinear on V_C)."""
    _same(x, y)
    return Element(x.algebra, _prod_data(x.algebra.kind, x.data, y.data), x.is_complex or y.is_complex)


def square(x: Element) -> Element:
    return product(x, x)


def inner(x: Element, y: Element):
    """Trace form ``(x|y) = tr(x o y)``, bilinear on V_C."""
    _same(x, y)
    val = x.coords() @ y.coords()
    return val if (x.is_complex or y.is_complex) else float(np.real(val))


def hermitian_inner(z: Element, w: Element) -> complex:
    """``(z|w)_h = tr(z o conj(w))``."""
    _same(z, w)
    return complex(z.coords() @ np.conj(w.coords()))


def lmul(x: Element) -> np.ndarray:
    """Matrix of the multiplication operator L(x) on coordinates."""
    alg = x.algebra
    cols = [product(x, b).coords() for b in alg.basis()]
    return np.array(cols).T


def quad_rep(x: Element) -> np.ndarray:
    """Matrix of P(x) = 2 L(x)^2 - L(x^2)."""
    lx = lmul(x)
    return 2 * lx @ lx - lmul(square(x))


def box(x: Element, y: Element) -> np.ndarray:
    """Matrix of ``x box y = L(xy) + [L(x), L(y)]``."""
    _same(x, y)
    lx, ly = lmul(x), lmul(y)
    return lmul(product(x, y)) + lx @ ly - ly @ lx


def quad(x: Element, y: Element) -> Element:
    """P(x)y without building the operator matrix."""
    _same(x, y)
    cplx = x.is_complex or y.is_complex
    if x.algebra.is_matrix:
        return Element(x.algebra, x.data @ y.data @ x.data, cplx)
    return 2 * product(x, product(x, y)) - product(square(x), y)


def apply_op(T: np.ndarray, x: Element) -> Element:
    """Apply an operator matrix to an element."""
    c = np.asarray(T) @ x.coords()
    cplx = x.is_complex or (np.iscomplexobj(c) and bool(np.any(np.abs(c.imag) > 0)))
    if not cplx:
        c = np.real(c)
    return x.algebra.from_coords(c, is_complex=cplx)


def congruence_operator(alg: Algebra, a) -> np.ndarray:
    """Operator of ``x -> a x a^*`` on a matrix algebra."""
    if not alg.is_matrix:
        raise AlgebraMismatch("congruence needs a matrix algebra")
    a = np.asarray(a)
    if alg.kind is Kind.SYM_REAL and np.iscomplexobj(a):
        raise DomainError("Sym congruences use a real matrix")
    cols = [Element(alg, a @ b.data @ a.conj().T).coords() for b in alg.basis()]
    return np.array(cols).T


# ---------------------------------------------------------------------------
# trace, determinant, inverse


def trace(x: Element):
    if x.algebra.is_matrix:
        t = np.trace(x.data)
    else:
        t = 2 * x.data[0]
    return complex(t) if x.is_complex else float(np.real(t))


def det(x: Element):
    if x.algebra.is_matrix:
        d = np.linalg.det(x.data)
    else:
        d = x.data[0] ** 2 - x.data[1:] @ x.data[1:]
    return complex(d) if x.is_complex else float(np.real(d))


def det_tr(x: Element) -> tuple:
    return det(x), trace(x)


def inverse(x: Element) -> Element:
    """Jordan inverse, valid on V and V_C."""
    if x.algebra.is_matrix:
        try:
            inv = np.linalg.inv(x.data)
        except np.linalg.LinAlgError as exc:
            raise SingularElement("element is not invertible") from exc
        scale = np.linalg.norm(x.data, 2)
        if scale == 0 or 1 / np.linalg.norm(inv, 2) <= 1e-14 * scale:
            raise SingularElement("element is not invertible")
        return Element(x.algebra, inv, x.is_complex)
    dt = det(x)
    if abs(dt) <= 1e-14 * max(x.norm() ** 2, 1e-300):
        raise SingularElement("element is not invertible")
    data = x.data.copy()
    data[1:] = -data[1:]
    return Element(x.algebra, data / dt, x.is_complex)


def transversal_det(x: Element) -> bool:
    return abs(det(x)) > TOL * max(1.0, x.norm()) ** x.algebra.r


# ---------------------------------------------------------------------------
# spectral theory


@dataclass(frozen=True)
class SpectralDecomposition:
    """Jordan frame and spectral values (sorted descending)."""

    values: np.ndarray
    frame: tuple

    def reconstruct(self) -> Element:
        alg = self.frame[0].algebra
        out = alg.zero()
        for lam, c in zip(self.values, self.frame):
            out = out + lam * c
        return out

    def residuals(self, x: Element | None = None) -> dict:
        alg = self.frame[0].algebra
        e = alg.unit()
        res = {
            "idempotent": max((square(c) - c).norm() for c in self.frame),
            "trace": max(abs(trace(c) - 1) for c in self.frame),
            "complete": (sum(self.frame[1:], self.frame[0]) - e).norm(),
            "orthogonal": max(
                [abs(inner(a, b)) for i, a in enumerate(self.frame) for b in self.frame[i + 1:]] or [0.0]
            ),
        }
        if x is not None:
            res["reconstruction"] = (self.reconstruct() - x).norm() / max(1.0, x.norm())
        return res


def standard_frame(alg: Algebra) -> list[Element]:
    """Diagonal frame for matrix kinds, ``((1, +-e_1)/2)`` for the spin factor."""
    if alg.is_matrix:
        out = []
        for j in range(alg.r):
            m = np.zeros((alg.r, alg.r))
            m[j, j] = 1
            out.append(Element(alg, m))
        return out
    v = np.zeros(alg.q - 1)
    v[0] = 1
    return [spin_element(alg, 0.5, v / 2), spin_element(alg, 0.5, -v / 2)]


def epsilon(alg: Algebra, k: int, frame: Sequence[Element] | None = None) -> Element:
    """Orbit representative ``sum_{j<=k} c_j - sum_{j>k} c_j``."""
    if not 0 <= k <= alg.r:
        raise DomainError(f"k must lie in 0..{alg.r}")
    frame = list(frame) if frame is not None else standard_frame(alg)
    out = alg.zero()
    for j, c in enumerate(frame):
        out = out + (1.0 if j < k else -1.0) * c
    return out


def spectral(x: Element) -> SpectralDecomposition:
    """Spectral decomposition of a real element.

    Parameters
    ----------
    x : Element
        Real element.

    Returns
    -------
    SpectralDecomposition
        Values sorted in descending order.  Under multiplicity the frame is
        one valid choice among many.
    """
    if x.is_complex:
        raise DomainError("spectral() needs a real element")
    alg = x.algebra
    if alg.is_matrix:
        w, vecs = np.linalg.eigh(x.data)
        order = np.argsort(w)[::-1]
        w, vecs = w[order], vecs[:, order]
        frame = tuple(Element(alg, np.outer(vecs[:, j], vecs[:, j].conj())) for j in range(alg.r))
    else:
        t, v = x.data[0], x.data[1:]
        nv = np.linalg.norm(v)
        if nv > 0:
            u = v / nv
        else:
            u = np.zeros_like(v)
            u[0] = 1.0
        w = np.array([t + nv, t - nv])
        frame = (spin_element(alg, 0.5, u / 2), spin_element(alg, 0.5, -u / 2))
    dec = SpectralDecomposition(np.asarray(w, dtype=float), frame)
    err = (dec.reconstruct() - x).norm()
    if err > 1e-9 * max(1.0, x.norm()):
        raise NumericalFailure(f"spectral reconstruction residual {err:.3e}")
    return dec


def spectral_values(x: Element) -> np.ndarray:
    """Spectral values only (descending)."""
    if x.is_complex:
        raise DomainError("spectral_values() needs a real element")
    if x.algebra.is_matrix:
        return np.linalg.eigvalsh(x.data)[::-1]
    nv = np.linalg.norm(x.data[1:])
    return np.array([x.data[0] + nv, x.data[0] - nv])


def funcalc(x: Element, f: Callable, domain: Callable | None = None) -> Element:
    """Apply a scalar function through the spectral decomposition.

    Parameters
    ----------
    x : Element
        Real element.
    f : callable
        Scalar function; may return complex values, in which case the
        result is an element of V_C.
    domain : callable, optional
        Predicate on a spectral value; a failing value raises
        ``DomainError``.
    """
    dec = spectral(x)
    if domain is not None:
        bad = [lam for lam in dec.values if not domain(lam)]
        if bad:
            raise DomainError(f"spectral values {bad} outside the domain of f")
    with np.errstate(all="ignore"):
        fv = np.array([f(lam) for lam in dec.values])
    if not np.all(np.isfinite(fv)):
        raise DomainError("f is not finite on the spectrum")
    cplx = np.iscomplexobj(fv) and bool(np.any(fv.imag != 0))
    alg = x.algebra
    out = alg.zero(is_complex=cplx)
    for val, c in zip(fv, dec.frame):
        out = out + (complex(val) if cplx else float(np.real(val))) * c
    return out


def sqrt(x: Element) -> Element:
    return funcalc(x, np.sqrt, lambda t: t >= -TOL * max(1.0, abs(t)))


def power(x: Element, p: float) -> Element:
    if float(p).is_integer() and p >= 0:
        return funcalc(x, lambda t: t ** int(p))
    if float(p).is_integer():
        return funcalc(x, lambda t: t ** int(p), lambda t: t != 0)
    return funcalc(x, lambda t: t ** p, lambda t: t > 0)


def log(x: Element) -> Element:
    return funcalc(x, np.log, lambda t: t > 0)


def exp(x: Element) -> Element:
    return funcalc(x, np.exp)


# ---------------------------------------------------------------------------
# Peirce decomposition and cone orbits


@dataclass(frozen=True)
class PeirceDecomposition:
    E1: np.ndarray
    Ehalf: np.ndarray
    E0: np.ndarray

    def dims(self) -> tuple:
        return tuple(int(round(np.trace(E).real)) for E in (self.E1, self.Ehalf, self.E0))


def peirce(c: Element) -> PeirceDecomposition:
    """Peirce projections for an idempotent c.

    ``E1 = P(c)``, ``E0 = P(e - c)``, ``Ehalf = I - E1 - E0``.
    """
    if c.is_complex:
        raise DomainError("peirce() needs a real idempotent")
    if (square(c) - c).norm() > 1e-8 * max(1.0, c.norm()):
        raise NotIdempotent("c o c != c")
    e = c.algebra.unit()
    E1 = quad_rep(c)
    E0 = quad_rep(e - c)
    Eh = np.eye(c.algebra.n) - E1 - E0
    return PeirceDecomposition(E1, Eh, E0)


def cone_classify(x: Element, tol: float = TOL) -> ConeClass:
    """Position of a real element with respect to the symmetric cone."""
    lam = spectral_values(x)
    scale = np.abs(lam).max()
    if scale == 0:
        return ConeClass.BOUNDARY
    lo = lam.min()
    if lo > tol * scale:
        return ConeClass.INTERIOR
    if lo >= -tol * scale:
        return ConeClass.BOUNDARY
    return ConeClass.EXTERIOR


def in_closed_cone(x: Element, tol: float = 1e-9) -> bool:
    return cone_classify(x, tol) is not ConeClass.EXTERIOR


def signature_orbit(x: Element, tol: float = TOL) -> int:
    """Number of positive spectral values (index k of the orbit of eps_k)."""
    lam = spectral_values(x)
    scale = np.abs(lam).max()
    if scale == 0 or np.abs(lam).min() <= tol * scale:
        raise SingularElement("det(x) is numerically zero")
    return int(np.sum(lam > 0))
