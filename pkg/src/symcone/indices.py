"""Integer invariants of points of the Shilov boundary and of its cover.

* ``transversality_index(s, t)``: orbit invariant of a pair on S, 0 exactly
  for transversal pairs and r for equal points.
* ``souriau_index(p, q)``: integer invariant of a pair on the cover,
  ``(1/pi) [sum Arg xi_j - r (theta - phi)]`` where ``xi_j`` are the
  spectral values of ``u(sigma)`` and u is a unitary structure map taking
  tau to -e.  Spectral values equal to -1 (non-transversal pairs) contribute
  the midpoint value 0 of the jump of Arg, and the report is flagged.
* ``maslov_triple``: triple index, computed as a sum of three Souriau
  indices of arbitrary lifts.
* Arnold, inertia and Arnold-Leray indices from the integer relations
  between them.
* ``rotation_number``: translation number of a lift estimated from K
  iterates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import boundary as bd
from . import jordan as jd
from .boundary import CoveringPoint
from .errors import (
    AmbiguousRank,
    DomainError,
    NormalizationFailure,
    NotPairwiseTransversal,
)
from .jordan import Algebra, Element

RANK_ZERO = 1e-9
RANK_NONZERO = 1e-5
MINUS_ONE_TOL = 1e-8


@dataclass
class IndexReport:
    """Integer index with the distance of the raw value to that integer."""

    value: int
    residual: float
    flags: tuple = ()
    inputs: dict = field(default_factory=dict)

    def __int__(self):
        return self.value


def _report(raw: float, flags=(), cls=NormalizationFailure, **inputs) -> IndexReport:
    value = int(np.rint(raw))
    res = float(abs(raw - value))
    if not res < 0.1:
        raise cls(f"index is not close to an integer (raw value {raw:.6f})")
    return IndexReport(value, res, tuple(flags), inputs)


def peirce_one_dim(alg: Algebra, k: int) -> int:
    """Dimension of V(c, 1) for an idempotent c of rank k."""
    return k + k * (k - 1) * alg.d // 2


# ---------------------------------------------------------------------------
# transversality index


def numerical_rank(op: np.ndarray) -> int:
    """Rank relative to ``max(s_max, 1)``; singular values in the gap are ambiguous.

    The floor of 1 keeps roundoff in ``sigma - sigma`` from counting as rank:
    on S the singular values of ``P(sigma - tau)`` never exceed 4.
    """
    s = np.linalg.svd(op, compute_uv=False)
    if s.size == 0:
        return 0
    rel = s / max(s[0], 1.0)
    if np.any((rel > RANK_ZERO) & (rel < RANK_NONZERO)):
        raise AmbiguousRank("singular values straddle the rank threshold")
    return int(np.sum(rel >= RANK_NONZERO))


def transversality_index(sigma: Element, tau: Element) -> IndexReport:
    """``mu(sigma, tau)`` from the rank of ``P(sigma - tau)``.

    ``sigma - tau`` has the same rank profile as ``2 c`` for an idempotent
    c of rank ``r - mu``, so ``rank P(sigma - tau) = dim V(c, 1)``.
    """
    sigma = bd.check_boundary(sigma)
    tau = bd.check_boundary(tau)
    alg = sigma.algebra
    rank = numerical_rank(jd.quad_rep(sigma - tau))
    for k in range(alg.r + 1):
        if peirce_one_dim(alg, alg.r - k) == rank:
            return IndexReport(k, 0.0, (), {"rank": rank})
    raise AmbiguousRank(f"rank {rank} is not attained by any orbit")


def transversality_index_orbit(sigma: Element, tau: Element) -> IndexReport:
    """Same index through the Cayley image: ``r - rank(c(w s) - c(w t))``.

    The scalar rotation w is chosen so that both rotated points are far
    from being non-transversal to e.
    """
    sigma = bd.check_boundary(sigma)
    tau = bd.check_boundary(tau)
    alg = sigma.algebra
    xi = np.concatenate([bd.normal_spectrum(sigma), bd.normal_spectrum(tau)])
    grid = np.linspace(0, 2 * np.pi, 97)[:-1]
    gaps = [np.abs(np.exp(1j * a) * xi - 1).min() for a in grid]
    a = grid[int(np.argmax(gaps))]
    rot = complex(np.exp(1j * a))
    diff = bd.cayley_c(rot * sigma) - bd.cayley_c(rot * tau)
    lam = jd.spectral_values(diff.real_part())
    rel = np.abs(lam) / max(np.abs(lam).max(), 1.0)
    if np.any((rel > RANK_ZERO) & (rel < RANK_NONZERO)):
        raise AmbiguousRank("spectral values straddle the rank threshold")
    rank = int(np.sum(rel >= RANK_NONZERO))
    return IndexReport(alg.r - rank, 0.0, (), {"rank": rank})


def maslov_stratum(sigma: Element, sigma0: Element) -> tuple[int, int]:
    """Stratum index k of sigma in the Maslov cycle of sigma0 and its codimension."""
    k = transversality_index(sigma, sigma0).value
    return k, peirce_one_dim(sigma.algebra, k)


# ---------------------------------------------------------------------------
# Souriau index


def souriau_index(p: CoveringPoint, q: CoveringPoint, branch: str = "principal") -> IndexReport:
    """Souriau index ``m(p, q)``.

    Parameters
    ----------
    p, q : CoveringPoint
    branch : {"principal", "alternate"}
        Choice of normalizer taking q's projection to -e.  Both give the
        same integer.
    """
    if p.algebra != q.algebra:
        raise DomainError("points belong to different algebras")
    alg = p.algebra
    u = bd.normalize_to_minus_e(q.sigma, branch)
    xi = bd.normal_spectrum(u.apply(p.sigma))
    hits = np.abs(xi + 1) < MINUS_ONE_TOL
    args = np.where(hits, 0.0, np.angle(xi))
    raw = (args.sum() - alg.r * (p.theta - q.theta)) / np.pi
    flags = ("non_transversal_midpoint",) if hits.any() else ()
    return _report(raw, flags)


# ---------------------------------------------------------------------------
# triple Maslov index


def maslov_triple(s1: Element, s2: Element, s3: Element, lifts=(0, 0, 0)) -> IndexReport:
    """Triple index of a pairwise transversal triple via the Leray sum.

    ``lifts`` selects the sheets ``theta_j = arg(det s_j)/r + 2 pi k_j / r``;
    the result does not depend on it.
    """
    pts = [bd.check_boundary(s) for s in (s1, s2, s3)]
    for a, b in ((0, 1), (1, 2), (0, 2)):
        if not bd.transversal(pts[a], pts[b]):
            raise NotPairwiseTransversal(f"points {a + 1} and {b + 1} are not transversal")
    p = [bd.lift(s, k) for s, k in zip(pts, lifts)]
    total = 0
    res = 0.0
    for a, b in ((0, 1), (1, 2), (2, 0)):
        rep = souriau_index(p[a], p[b])
        total += rep.value
        res = max(res, rep.residual)
    r = pts[0].algebra.r
    if abs(total) > r:
        raise NormalizationFailure("triple index out of range")
    return IndexReport(total, res)


def maslov_normal_form(alg: Algebra, k: int) -> tuple[Element, Element, Element]:
    """Triple ``(e, -e, -i eps_k)`` whose index is ``2k - r``."""
    e = alg.unit().as_complex()
    return e, -e, -1j * jd.epsilon(alg, k).as_complex()


def leray_sum(p1: CoveringPoint, p2: CoveringPoint, p3: CoveringPoint) -> IndexReport:
    """``m(p1, p2) + m(p2, p3) + m(p3, p1)`` without transversality checks."""
    reps = [souriau_index(p1, p2), souriau_index(p2, p3), souriau_index(p3, p1)]
    flags = tuple(sorted({f for r in reps for f in r.flags}))
    return IndexReport(sum(r.value for r in reps), max(r.residual for r in reps), flags)


def permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def skew_symmetry_defect(s1: Element, s2: Element, s3: Element) -> int:
    """Sum over permutations of ``|i(s_perm) - sign(perm) i(s)|`` (0 when skew)."""
    pts = (s1, s2, s3)
    base = maslov_triple(*pts).value
    return sum(abs(maslov_triple(*(pts[i] for i in pm)).value - permutation_sign(pm) * base)
               for pm in permutations(range(3)))


def maslov_cocycle(s1, s2, s3, s4) -> int:
    """``i(234) - i(134) + i(124) - i(123)`` (0 for a cocycle)."""
    return (maslov_triple(s2, s3, s4).value - maslov_triple(s1, s3, s4).value
            + maslov_triple(s1, s2, s4).value - maslov_triple(s1, s2, s3).value)


# ---------------------------------------------------------------------------
# Arnold, inertia and Arnold-Leray indices


def _half(raw_twice: int, what: str) -> int:
    if raw_twice % 2:
        raise NormalizationFailure(f"{what} is not an integer")
    return raw_twice // 2


def arnold_index(p: CoveringPoint, q: CoveringPoint) -> IndexReport:
    """``nu = (m - mu - r) / 2``."""
    m = souriau_index(p, q)
    mu = transversality_index(p.sigma, q.sigma).value
    return IndexReport(_half(m.value - mu - p.algebra.r, "Arnold index"), m.residual, m.flags)


def inertia_index(s1: Element, s2: Element, s3: Element) -> IndexReport:
    """``j = (i + mu12 - mu13 + mu23 + r) / 2`` with i from the Leray sum."""
    p = [bd.lift(bd.check_boundary(s)) for s in (s1, s2, s3)]
    i = leray_sum(*p)
    mu = transversality_index
    total = i.value + mu(s1, s2).value - mu(s1, s3).value + mu(s2, s3).value + p[0].algebra.r
    return IndexReport(_half(total, "inertia index"), i.residual, i.flags)


def arnold_leray_index(p: CoveringPoint, q: CoveringPoint) -> IndexReport:
    """``n = nu + mu + r``."""
    nu = arnold_index(p, q)
    mu = transversality_index(p.sigma, q.sigma).value
    return IndexReport(nu.value + mu + p.algebra.r, nu.residual, nu.flags)


def inertia_cocycle(s1, s2, s3, s4) -> int:
    """``j(123) - j(124) + j(134) - j(234)`` (0 for a 2-cocycle)."""
    j = lambda a, b, c: inertia_index(a, b, c).value
    return j(s1, s2, s3) - j(s1, s2, s4) + j(s1, s3, s4) - j(s2, s3, s4)


def arnold_leray_coboundary_defect(p1, p2, p3) -> int:
    """``j(123) - (n12 - n13 + n23)`` (0 when n is a primitive of j)."""
    n = lambda a, b: arnold_leray_index(a, b).value
    j = inertia_index(p1.sigma, p2.sigma, p3.sigma).value
    return j - (n(p1, p2) - n(p1, p3) + n(p2, p3))


# ---------------------------------------------------------------------------
# rotation number


@dataclass
class RotationEstimate:
    tau: float
    rho: float
    error_bound: float
    iterations: int


def rotation_number(g, base: CoveringPoint | None = None, K: int = 1024) -> RotationEstimate:
    """Translation and rotation numbers of a lift.

    Parameters
    ----------
    g : Lift
        Element of the cover group (see :mod:`symcone.conformal`).
    base : CoveringPoint, optional
        Reference point; defaults to ``(-e, -pi)``.
    K : int
        Number of iterates.

    Notes
    -----
    ``c(g) = m(g . o, o)`` is a quasi-morphism with defect at most r, so
    ``c(g^K)/K`` is within ``r/K`` of the translation number.  The iterate
    ``g^K . o`` is computed by applying g K times, which keeps the matrices
    bounded.
    """
    if K < 1:
        raise DomainError("K must be positive")
    alg = g.algebra
    if base is None:
        base = CoveringPoint(-alg.unit().as_complex(), -np.pi)
    p = base
    for _ in range(K):
        p = g.act(p)
    c = souriau_index(p, base).value
    tau = c / K
    rho = float(np.mod(-tau / 2, 1.0))
    return RotationEstimate(tau, rho, alg.r / K, K)


def circle_distance(a: float, b: float) -> float:
    """Distance between two reals modulo 1."""
    d = np.mod(a - b, 1.0)
    return float(min(d, 1 - d))
