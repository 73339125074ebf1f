"""Random test data: elements, cone points, cone automorphisms."""
from __future__ import annotations

import numpy as np

from . import jordan as jd
from .jordan import Algebra, Element, Kind


def random_element(alg: Algebra, rng: np.random.Generator, is_complex: bool = False,
                   scale: float = 1.0) -> Element:
    c = rng.normal(size=alg.n) * scale
    if is_complex:
        c = c + 1j * rng.normal(size=alg.n) * scale
        return alg.from_coords(c, is_complex=True)
    return alg.from_coords(c)


def random_cone_point(alg: Algebra, rng: np.random.Generator, spread: float = 1.0) -> Element:
    """``exp`` of a random element, so spectral values are log-normal."""
    return jd.exp(random_element(alg, rng, scale=spread / np.sqrt(alg.n)))


def random_orthogonal(k: int, rng: np.random.Generator, complex_: bool = False) -> np.ndarray:
    m = rng.normal(size=(k, k))
    if complex_:
        m = m + 1j * rng.normal(size=(k, k))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_invertible(alg: Algebra, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """Matrix close to a random rotation, real for Sym, complex for Herm."""
    r = alg.r
    cplx = alg.kind is Kind.HERM_COMPLEX
    g = random_orthogonal(r, rng, cplx)
    d = np.exp(rng.normal(size=r) * scale)
    return g @ np.diag(d) @ random_orthogonal(r, rng, cplx)


def lorentz_boost(q: int, u, s: float) -> np.ndarray:
    """Boost of rapidity s along unit vector u, acting on (t, v)."""
    u = np.asarray(u, dtype=float)
    m = np.eye(q)
    ch, sh = np.cosh(s), np.sinh(s)
    m[0, 0] = ch
    m[0, 1:] = sh * u
    m[1:, 0] = sh * u
    m[1:, 1:] += (ch - 1) * np.outer(u, u)
    return m


def random_cone_automorphism(alg: Algebra, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """Operator matrix of a random element of the linear automorphism group."""
    if alg.is_matrix:
        return jd.congruence_operator(alg, random_invertible(alg, rng, scale))
    q = alg.q
    u = rng.normal(size=q - 1)
    u /= np.linalg.norm(u)
    rot = np.eye(q)
    rot[1:, 1:] = random_orthogonal(q - 1, rng)
    lam = np.exp(rng.normal() * scale)
    # coordinates are a fixed multiple of the data vector, so this matrix acts on both
    return lam * lorentz_boost(q, u, rng.normal() * scale) @ rot


def random_frame(alg: Algebra, rng: np.random.Generator) -> list:
    return list(jd.spectral(random_element(alg, rng)).frame)


def separation(s: Element, t: Element) -> float:
    """Smallest singular value of ``P(s - t)``; 0 for non-transversal pairs."""
    return float(np.linalg.svd(jd.quad_rep(s.as_complex() - t.as_complex()), compute_uv=False).min())


def random_boundary_tuple(alg: Algebra, rng: np.random.Generator, size: int,
                          gap: float = 1e-3) -> list:
    """Points of S that are pairwise transversal with a margin.

    Pairs whose separation falls below ``gap`` are redrawn, which keeps
    samples away from the rank-ambiguity band of the transversality index.
    """
    from .boundary import random_boundary_point

    while True:
        pts = [random_boundary_point(alg, rng) for _ in range(size)]
        if all(separation(a, b) >= gap for i, a in enumerate(pts) for b in pts[i + 1:]):
            return pts


def random_compression(alg: Algebra, rng: np.random.Generator, which: str = "S"):
    """``N+(u) G0(a) N-(v)`` with u, v in the closed cone.

    ``which`` picks the ideal: "S" (u, v on the boundary of the cone),
    "S1" (u interior), "S2" (v interior) or "S1S2" (both interior).
    """
    from . import cone

    def boundary_point():
        # rank-deficient square, so it lies on the boundary of the cone
        c = random_element(alg, rng)
        sd = jd.spectral(c)
        vals = np.abs(sd.values)
        vals[-1] = 0.0
        return jd.Element(alg, sum(v * f.data for v, f in zip(vals, sd.frame)))

    u = random_cone_point(alg, rng) if which in ("S1", "S1S2") else boundary_point()
    v = random_cone_point(alg, rng) if which in ("S2", "S1S2") else boundary_point()
    a = random_invertible(alg, rng)
    return cone.translation(u) @ cone.linear(alg, a) @ cone.inverse_translation(v)
