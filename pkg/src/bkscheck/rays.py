"""Exact projective linear algebra over the rationals.

A :class:`Ray` is a direction in real projective space, stored as its
canonical integer representative: coprime components with the first nonzero
entry positive.  Everything here is exact; there is no floating point and no
tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

# Product basis of two spin-1/2 particles, in the order used for 4-dim rays.
TENSOR_BASIS = ("up-up", "up-down", "down-up", "down-down")


class RayError(ValueError):
    """Base class for errors raised by ray operations."""


class EmptyVector(RayError):
    pass


class ZeroVector(RayError):
    pass


class DimensionMismatch(RayError):
    pass


class NotOrthogonal(RayError):
    pass


class NotCoindependent(RayError):
    pass


@dataclass(frozen=True, order=True)
class Ray:
    """Canonical integer representative of a projective direction.

    Construct rays with :func:`canonicalize` (or :func:`ray`); the constructor
    only accepts components that are already canonical.
    """

    components: tuple[int, ...]

    def __post_init__(self):
        comps = self.components
        if not isinstance(comps, tuple):
            comps = tuple(comps)
            object.__setattr__(self, "components", comps)
        if not comps:
            raise EmptyVector("a ray needs at least one component")
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in comps):
            raise TypeError("ray components must be int; use canonicalize()")
        lead = next((c for c in comps if c), 0)
        if lead == 0:
            raise ZeroVector("the zero vector is not a ray")
        if lead < 0 or _gcd_all(comps) != 1:
            raise ValueError(f"{comps} is not canonical; use canonicalize()")

    @property
    def dim(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"Ray{self}"


@dataclass(frozen=True)
class LocalRay:
    """A single-particle proposition: a 2-dim ray tagged with its particle."""

    particle: int
    ray: Ray

    def __post_init__(self):
        if self.particle not in (1, 2):
            raise ValueError(f"particle must be 1 or 2, got {self.particle}")
        if self.ray.dim != 2:
            raise DimensionMismatch(f"local rays are 2-dimensional, got {self.ray}")

    def __str__(self):
        return f"{self.ray}^({self.particle})"


def _gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point components are not accepted")
    if isinstance(x, (int, Rational, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as a ray component")


def canonicalize(components: Iterable) -> Ray:
    """Return the canonical ray through a nonzero rational vector.

    Components may be ints, :class:`fractions.Fraction` or strings such as
    ``"1/2"``.

    >>> canonicalize([0, 2, -2, 0])
    Ray(0,1,-1,0)
    >>> canonicalize(["1/2", "-1/2", 0, 0])
    Ray(1,-1,0,0)
    """
    fracs = [_as_fraction(c) for c in components]
    if not fracs:
        raise EmptyVector("cannot canonicalize an empty vector")
    if not any(fracs):
        raise ZeroVector("cannot canonicalize the zero vector")
    scale = lcm(*(f.denominator for f in fracs))
    ints = [int(f * scale) for f in fracs]
    g = _gcd_all(ints)
    lead = next(c for c in ints if c)
    if lead < 0:
        g = -g
    return Ray(tuple(c // g for c in ints))


def ray(*components) -> Ray:
    """Shorthand for ``canonicalize(components)``."""
    return canonicalize(components)


def _check_dims(rays: Iterable[Ray], dim: int) -> None:
    for r in rays:
        if r.dim != dim:
            raise DimensionMismatch(f"{r} has dimension {r.dim}, expected {dim}")


def inner(a: Ray, b: Ray) -> int:
    """Euclidean dot product of the canonical integer components."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"cannot pair {a} (dim {a.dim}) with {b} (dim {b.dim})")
    return sum(x * y for x, y in zip(a.components, b.components))


def is_orthogonal(a: Ray, b: Ray) -> bool:
    return inner(a, b) == 0


def pairwise_orthogonal(rays: Sequence[Ray]) -> bool:
    return all(inner(a, b) == 0 for a, b in combinations(rays, 2))


def is_orthogonal_basis(rays: Sequence[Ray], dim: int) -> bool:
    """True iff ``rays`` are exactly ``dim`` mutually orthogonal rays of dimension ``dim``."""
    _check_dims(rays, dim)
    return len(rays) == dim and pairwise_orthogonal(rays)


def _row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rays: Sequence[Ray]) -> int:
    """Rank of the matrix whose rows are ``rays``."""
    return len(_row_reduce([r.components for r in rays])[1])


def nullspace(rays: Sequence[Ray], dim: int) -> list[Ray]:
    """A basis (as rays) of the orthogonal complement of ``span(rays)``."""
    _check_dims(rays, dim)
    reduced, pivots = _row_reduce([r.components for r in rays])
    basis = []
    for free in (c for c in range(dim) if c not in pivots):
        vec = [Fraction(0)] * dim
        vec[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[free]
        basis.append(canonicalize(vec))
    return basis


def complete_to_basis(rays: Sequence[Ray], dim: int) -> Ray:
    """Return the ray completing ``dim - 1`` orthogonal rays to an orthogonal basis."""
    _check_dims(rays, dim)
    if not pairwise_orthogonal(rays):
        raise NotOrthogonal("input rays are not pairwise orthogonal")
    complement = nullspace(rays, dim)
    if len(complement) != 1:
        raise NotCoindependent(
            f"orthogonal complement has dimension {len(complement)}, expected 1"
        )
    return complement[0]


def in_span(target: Ray, rays: Sequence[Ray]) -> bool:
    """True iff ``target`` is a rational linear combination of ``rays``."""
    _check_dims(rays, target.dim)
    if not rays:
        return False
    return rank(list(rays) + [target]) == rank(rays)


def same_span(a: Sequence[Ray], b: Sequence[Ray]) -> bool:
    if not a or not b:
        return not a and not b
    _check_dims(b, a[0].dim)
    r = rank(a)
    return r == rank(b) == rank(list(a) + list(b))


def perp2(r: Ray) -> Ray:
    """The 2-dim ray orthogonal to ``r``: ``(a, b) -> (-b, a)``."""
    if r.dim != 2:
        raise DimensionMismatch(f"perp2 needs a 2-dim ray, got {r}")
    a, b = r.components
    return canonicalize((-b, a))


def tensor_product(u: Ray, w: Ray) -> Ray:
    """Product ray ``u (x) w`` in the basis ordering of :data:`TENSOR_BASIS`."""
    if u.dim != 2 or w.dim != 2:
        raise DimensionMismatch(f"tensor_product needs two 2-dim rays, got {u} and {w}")
    u1, u2 = u.components
    w1, w2 = w.components
    return canonicalize((u1 * w1, u1 * w2, u2 * w1, u2 * w2))


def factorize_ray(r: Ray) -> tuple[Ray, Ray] | None:
    """Split a 4-dim ray into particle-1 and particle-2 factors.

    Returns None for entangled (rank-2) rays.
    """
    if r.dim != 4:
        raise DimensionMismatch(f"factorize_ray needs a 4-dim ray, got {r}")
    r1, r2, r3, r4 = r.components
    if r1 * r4 - r2 * r3 != 0:
        return None
    w = canonicalize((r1, r2) if (r1, r2) != (0, 0) else (r3, r4))
    u = canonicalize((r1, r3) if (r1, r3) != (0, 0) else (r2, r4))
    return u, w


def lift_dimension(r: Ray, zeros: int) -> Ray:
    """Append ``zeros`` trailing zero components."""
    if zeros < 0:
        raise ValueError("zeros must be nonnegative")
    return Ray(r.components + (0,) * zeros)
