"""Hypothesis strategies and small generators shared by the tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from bkscheck.constraints import EquationSystem, ValueEquation
from bkscheck.rays import Ray, canonicalize, ray


def var_ray(k: int) -> Ray:
    # (1, k, k^2, k^3) is canonical and distinct for distinct k >= 0
    return ray(1, k, k * k, k**3)


def random_system(rng: random.Random, max_vars: int, max_eqs: int = 6) -> EquationSystem:
    n = rng.randint(1, max_vars)
    rays = [var_ray(k) for k in range(n)]
    equations = []
    for e in range(rng.randint(1, max_eqs)):
        size = rng.randint(1, min(n, 6))
        chosen = rng.sample(rays, size)
        cut = rng.randint(0, size)
        lhs, rhs = chosen[:cut], chosen[cut:]
        if rng.random() < 0.2 and n > size:
            # one ray on both sides
            shared = rng.choice(rays)
            if shared not in lhs and shared not in rhs:
                lhs.append(shared)
                rhs.append(shared)
        constant = rng.randint(0, 2)
        equations.append(ValueEquation.normalized(lhs, rhs, constant, f"R{e + 1}"))
    return EquationSystem(4, tuple(rays), tuple(equations), name="random")


@st.composite
def systems(draw, max_vars: int = 12, max_eqs: int = 6):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_system(random.Random(seed), max_vars, max_eqs)


small_ints = st.integers(-6, 6)


@st.composite
def rays_of_dim(draw, dim: int):
    comps = draw(st.lists(small_ints, min_size=dim, max_size=dim))
    if not any(comps):
        comps[draw(st.integers(0, dim - 1))] = draw(st.sampled_from([-2, -1, 1, 3]))
    return canonicalize(comps)


_HEAD = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_"
_TAIL = _HEAD + "0123456789.'-"


def _random_name(rng: random.Random) -> str:
    return rng.choice(_HEAD) + "".join(rng.choice(_TAIL) for _ in range(rng.randint(0, 6)))


def _random_ray(rng: random.Random, dim: int) -> Ray:
    comps = [rng.randint(-6, 6) for _ in range(dim)]
    if not any(comps):
        comps[rng.randrange(dim)] = rng.choice([-2, -1, 1, 3])
    return canonicalize(comps)


def random_document(rng: random.Random) -> EquationSystem:
    """A random well-formed system with names, rays, state and forced rays."""
    dim = rng.randint(1, 5)
    rays = list(dict.fromkeys(_random_ray(rng, dim) for _ in range(rng.randint(1, 8))))
    names = set()
    while len(names) < len(rays):
        names.add(_random_name(rng))
    labels = set()
    for _ in range(rng.randint(0, 5)):
        labels.add(_random_name(rng))
    equations = []
    for label in sorted(labels):
        lhs = rng.sample(rays, rng.randint(0, min(4, len(rays))))
        rhs = rng.sample(rays, rng.randint(0, min(4, len(rays))))
        equations.append(ValueEquation.normalized(lhs, rhs, rng.randint(-3, 3), label))
    state = _random_ray(rng, dim) if rng.random() < 0.5 else None
    forced = [(_random_ray(rng, dim), rng.randint(0, 1)) for _ in range(rng.randint(0, 3))]
    return EquationSystem(
        dim, tuple(rays), tuple(equations),
        name=_random_name(rng) if rng.random() < 0.7 else "",
        state=state,
        state_name=_random_name(rng) if state is not None else "",
        names=tuple(sorted(names)),
        forced=tuple(forced),
    )


@st.composite
def documents(draw):
    return random_document(random.Random(draw(st.integers(0, 2**64 - 1))))
