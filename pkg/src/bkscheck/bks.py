"""Value-assignment no-go proofs as data, plus the derivations behind them.

The catalog holds two proofs in R^4:

``cabello14``
    fourteen rays and five equations with no consistent 0/1 assignment,
    independent of the prepared state;
``singlet5``
    five rays and three equations that fail for a system prepared in the
    two-spin singlet state ``(0,1,-1,0)``.

Both are stored verbatim and re-derived from geometry when the catalog is
built; any disagreement raises :class:`CatalogError`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations, product
from typing import Sequence

from .constraints import (
    ConstraintError,
    EquationSystem,
    ValueEquation,
    build_basis_equation,
    build_difference_equation,
    substitute,
)
from .rays import (
    DimensionMismatch,
    LocalRay,
    NotOrthogonal,
    Ray,
    RayError,
    complete_to_basis,
    factorize_ray,
    in_span,
    inner,
    is_orthogonal_basis,
    lift_dimension,
    nullspace,
    pairwise_orthogonal,
    perp2,
    ray,
    same_span,
)

SINGLET = ray(0, 1, -1, 0)


class CatalogError(RuntimeError):
    """Stored catalog data disagrees with its geometric re-derivation."""


class NotFactorizable(ValueError):
    def __init__(self, r: Ray):
        super().__init__(f"{r} is not a product of two 2-dim rays")
        self.ray = r


class NotACrossProductFamily(ValueError):
    pass


class ModeMismatch(ValueError):
    pass


class ProofKind(str, enum.Enum):
    STATE_INDEPENDENT = "state_independent"
    STATE_SPECIFIC = "state_specific"


class CountMode(str, enum.Enum):
    CONDITION_D = "condition_d"
    FULL = "full"
    FULL_WITH_STATE = "full_with_state"


@dataclass(frozen=True)
class ProofEntry:
    name: str
    system: EquationSystem
    kind: ProofKind
    notes: str = ""

    @classmethod
    def from_system(cls, system: EquationSystem, notes: str = "") -> "ProofEntry":
        kind = ProofKind.STATE_SPECIFIC if system.state is not None else ProofKind.STATE_INDEPENDENT
        return cls(system.name, system, kind, notes or system.notes)


@dataclass(frozen=True)
class SingletDerivation:
    """Trace of the singlet relation for four product rays.

    ``factorizations[i]`` is the (particle 1, particle 2) factor pair of
    ``input_rays[i]``; ``substituted_terms[i]`` replaces the particle-2 factor
    by its equal-valued particle-1 partner; ``grouping`` holds the two
    particle-1 bases whose cross products the terms are.
    """

    input_rays: tuple[Ray, ...]
    factorizations: tuple[tuple[LocalRay, LocalRay], ...]
    substituted_terms: tuple[tuple[LocalRay, LocalRay], ...]
    grouping: tuple[tuple[Ray, Ray], tuple[Ray, Ray]]


# -- derivations -------------------------------------------------------------


def state_substitution(system: EquationSystem, state: Ray | None = None) -> EquationSystem:
    """Fix the values forced by preparing ``state``.

    The state's own ray takes value 1 and every variable ray orthogonal to it
    takes value 0.  The returned system carries ``state`` and lists the
    eliminated rays in ``forced`` and ``notes``.
    """
    if state is None:
        state = system.state
    if state is None:
        raise ValueError("no state given and the system has none")
    if state.dim != system.dim:
        raise DimensionMismatch(f"state {state} does not match system dimension {system.dim}")
    fixed: dict[Ray, int] = {}
    for r in system.rays:
        if r == state:
            fixed[r] = 1
        elif inner(r, state) == 0:
            fixed[r] = 0
    reduced = substitute(system, fixed)
    forced_note = ", ".join(f"v{r}={v}" for r, v in fixed.items()) or "nothing"
    note = f"state {state}: fixed {forced_note}"
    notes = f"{system.notes}\n{note}".strip()
    return replace(reduced, state=state, state_name=system.state_name or "w", notes=notes)


def condition_d_check(rays: Sequence[Ray], state: Ray) -> bool:
    """True iff the orthogonal set ``rays`` spans a subspace containing ``state``.

    Such a set must then have value sum 1 in a system prepared in ``state``.
    """
    for r in rays:
        if r.dim != state.dim:
            raise DimensionMismatch(f"{r} does not match the state dimension {state.dim}")
    if not pairwise_orthogonal(rays):
        raise NotOrthogonal("condition (d) needs pairwise orthogonal rays")
    return in_span(state, rays)


def build_singlet_relation(
    rays: Sequence[Ray], label: str = ""
) -> tuple[ValueEquation, SingletDerivation]:
    """Prove ``sum v(rays) = 1`` for four product rays in the singlet state.

    Each ray u (x) w is rewritten as v(u) v(w'), where w' = perp2(w) is the
    particle-1 ray perfectly anticorrelated with w.  The relation holds when
    the four products are exactly the cross products of two particle-1 bases
    {e, e'} x {f, f'}: the sum then factors as (v(e)+v(e'))(v(f)+v(f')) = 1.
    """
    rays = tuple(rays)
    if len(rays) != 4:
        raise NotACrossProductFamily(f"need exactly four rays, got {len(rays)}")
    if len(set(rays)) != 4:
        raise NotACrossProductFamily("the four rays must be distinct")
    factorizations = []
    terms = []
    for r in rays:
        if r.dim != 4:
            raise DimensionMismatch(f"{r} is not a two-spin ray")
        parts = factorize_ray(r)
        if parts is None:
            raise NotFactorizable(r)
        u, w = parts
        factorizations.append((LocalRay(1, u), LocalRay(2, w)))
        terms.append((LocalRay(1, u), LocalRay(1, perp2(w))))

    seen = list(dict.fromkeys(lr.ray for term in terms for lr in term))
    bases = []
    for e in seen:
        if any(e in b for b in bases):
            continue
        partner = perp2(e)
        if partner not in seen:
            raise NotACrossProductFamily(f"{e} has no orthogonal partner among the terms")
        bases.append((e, partner))
    if len(bases) != 2:
        raise NotACrossProductFamily(
            f"terms involve {len(bases)} particle-1 bases, need exactly two"
        )
    crosses = {frozenset((a, b)) for a in bases[0] for b in bases[1]}
    got = [frozenset((x.ray, y.ray)) for x, y in terms]
    if len(set(got)) != 4 or set(got) != crosses:
        raise NotACrossProductFamily("terms are not the four cross products of two bases")

    derivation = SingletDerivation(rays, tuple(factorizations), tuple(terms), tuple(bases))
    return ValueEquation(rays, (), 1, label), derivation


def singlet_sum_table(derivation: SingletDerivation) -> list[tuple[dict[Ray, int], int]]:
    """Evaluate the product terms for every admissible particle-1 assignment.

    Admissible means each orthogonal pair among the particle-1 rays has
    exactly one value 1.  Returns ``(values, sum)`` rows.
    """
    local = list(dict.fromkeys(lr.ray for t in derivation.substituted_terms for lr in t))
    pairs = [p for p in combinations(local, 2) if is_orthogonal_basis(p, 2)]
    rows = []
    for bits in product((0, 1), repeat=len(local)):
        values = dict(zip(local, bits))
        if any(values[a] + values[b] != 1 for a, b in pairs):
            continue
        total = sum(values[x.ray] * values[y.ray] for x, y in derivation.substituted_terms)
        rows.append((values, total))
    return rows


def merit_ratio(system: EquationSystem) -> Fraction:
    """Rays appearing in the equations divided by the ambient dimension."""
    return Fraction(len(system.used_rays()), system.dim)


def count_propositions(entry: ProofEntry | EquationSystem, mode: CountMode | str) -> int:
    """Count the propositions a proof relies on.

    ``condition_d`` counts the rays in the final equations; ``full`` adds the
    rays eliminated as orthogonal to the prepared state; ``full_with_state``
    adds the state itself.
    """
    if isinstance(entry, EquationSystem):
        entry = ProofEntry.from_system(entry)
    mode = CountMode(mode.replace("-", "_") if isinstance(mode, str) else mode)
    system = entry.system
    base = len(system.used_rays())
    if mode is CountMode.CONDITION_D:
        return base
    if entry.kind is not ProofKind.STATE_SPECIFIC or system.state is None:
        raise ModeMismatch(f"mode {mode.value} needs a state-specific proof")
    orthogonal = sum(1 for r, v in system.forced if v == 0 and r != system.state)
    if mode is CountMode.FULL:
        return base + orthogonal
    return base + orthogonal + 1


def lift_system(system: EquationSystem, zeros: int) -> EquationSystem:
    """Append ``zeros`` trailing zero components to every ray and the state."""
    def up(r: Ray) -> Ray:
        return lift_dimension(r, zeros)

    equations = tuple(
        ValueEquation(tuple(map(up, eq.lhs)), tuple(map(up, eq.rhs)), eq.constant, eq.label)
        for eq in system.equations
    )
    return replace(
        system,
        dim=system.dim + zeros,
        rays=tuple(map(up, system.rays)),
        equations=equations,
        state=None if system.state is None else up(system.state),
        forced=tuple((up(r), v) for r, v in system.forced),
    )


def simultaneously_measurable(eq: ValueEquation) -> bool:
    """True iff all participating rays are mutually orthogonal (commuting projectors)."""
    return pairwise_orthogonal(eq.rays)


# -- structural verification ---------------------------------------------------


@dataclass(frozen=True)
class EquationCheck:
    label: str
    provenance: str | None
    detail: str

    @property
    def ok(self) -> bool:
        return self.provenance is not None


def _strip_trailing_zeros(rays: Sequence[Ray], dim: int) -> list[Ray] | None:
    """Project lifted rays back to ``dim`` components, if their tails are all zero."""
    if any(any(r.components[dim:]) for r in rays):
        return None
    return [Ray(r.components[:dim]) for r in rays]


def classify_equation(system: EquationSystem, eq: ValueEquation) -> EquationCheck:
    """Re-derive one equation from geometry and name the rule that justifies it.

    Provenance is one of ``basis``, ``basis-difference``, ``state-derived``,
    ``singlet-relation``; None means no rule applies.
    """
    dim = system.dim
    label = eq.label
    if eq.constant == 1 and not eq.rhs:
        if is_orthogonal_basis(eq.lhs, dim):
            build_basis_equation(eq.lhs, dim, label)
            return EquationCheck(label, "basis", "orthogonal basis sums to 1")
        state = system.state
        if state is not None and eq.lhs and pairwise_orthogonal(eq.lhs):
            if condition_d_check(eq.lhs, state):
                return EquationCheck(label, "state-derived", f"span contains state {state}")
        if state is not None and len(eq.lhs) == 4:
            projected = _strip_trailing_zeros(list(eq.lhs) + [state], 4)
            if projected is not None and projected[-1] == SINGLET:
                try:
                    derived, trace = build_singlet_relation(projected[:4], label)
                except (NotFactorizable, NotACrossProductFamily) as exc:
                    return EquationCheck(label, None, f"singlet relation fails: {exc}")
                a, b = trace.grouping
                return EquationCheck(
                    label,
                    "singlet-relation",
                    f"cross products of {{{a[0]},{a[1]}}} x {{{b[0]},{b[1]}}}",
                )
        return EquationCheck(label, None, "rays are not a basis and no state rule applies")
    if eq.constant == 0 and eq.lhs and len(eq.lhs) == len(eq.rhs):
        if not (pairwise_orthogonal(eq.lhs) and pairwise_orthogonal(eq.rhs)):
            return EquationCheck(label, None, "a side is not pairwise orthogonal")
        if not same_span(eq.lhs, eq.rhs):
            return EquationCheck(label, None, "the two sides span different subspaces")
        complement = nullspace(eq.lhs, dim)
        if len(complement) == 1:
            common = complete_to_basis(eq.lhs, dim)
            if complete_to_basis(eq.rhs, dim) != common:
                return EquationCheck(label, None, "the two sides complete differently")
            rebuilt = build_difference_equation(
                list(eq.lhs) + [common], list(eq.rhs) + [common], dim, label
            )
            if not rebuilt.same_relation(eq):
                return EquationCheck(label, None, "rebuilt difference equation differs")
            return EquationCheck(label, "basis-difference", f"common completion {common}")
        return EquationCheck(label, "basis-difference", "both sides span the same subspace")
    return EquationCheck(label, None, "equation shape matches no derivation rule")


def verify_system(system: EquationSystem) -> list[EquationCheck]:
    return [classify_equation(system, eq) for eq in system.equations]


# -- catalog -------------------------------------------------------------------

# Equations transcribed as (lhs, rhs, constant).
CABELLO14_DATA = (
    (((0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)), ((0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)), 0),
    (((1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)), ((1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)), 0),
    (((0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1)), ((1, -1, -1, 1), (1, 1, 1, 1), (0, 1, -1, 0)), 0),
    (((1, 1, -1, 1), (1, 0, 1, 0), (0, 1, 0, -1)), ((1, 1, 1, -1), (1, 0, 0, 1), (0, 1, -1, 0)), 0),
    (((1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)), (), 1),
)
CABELLO14_LABELS = ("E1", "E2", "E3", "E4", "E5")

SINGLET5_DATA = (
    (((1, 1, -1, 1), (1, -1, 0, 0), (0, 0, 1, 1)), (), 1),
    (((1, 1, -1, 1), (1, 0, 1, 0), (0, 1, 0, -1)), (), 1),
    (((1, -1, 0, 0), (0, 0, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)), (), 1),
)
SINGLET5_LABELS = ("E6", "E7", "E8")


def _equations(data, labels) -> tuple[ValueEquation, ...]:
    return tuple(
        ValueEquation(tuple(ray(*c) for c in lhs), tuple(ray(*c) for c in rhs), k, label)
        for (lhs, rhs, k), label in zip(data, labels)
    )


def _expect(stored: ValueEquation, derived: ValueEquation) -> None:
    if not stored.same_relation(derived):
        raise CatalogError(f"{stored.label}: stored {stored} but derived {derived}")


def _cabello14() -> EquationSystem:
    stored = _equations(CABELLO14_DATA, CABELLO14_LABELS)
    rays = dict.fromkeys(r for eq in stored for r in eq.rays)
    names = {r: f"u{i + 1}" for i, r in enumerate(rays)}
    for eq in stored[:4]:
        try:
            common = complete_to_basis(eq.lhs, 4)
            if complete_to_basis(eq.rhs, 4) != common:
                raise CatalogError(f"{eq.label}: the two triads complete to different rays")
            derived = build_difference_equation(
                eq.lhs + (common,), eq.rhs + (common,), 4, eq.label
            )
        except (RayError, ConstraintError) as exc:
            raise CatalogError(f"{eq.label}: cannot re-derive ({exc})") from exc
        _expect(eq, derived)
    try:
        _expect(stored[4], build_basis_equation(stored[4].lhs, 4, "E5"))
    except ConstraintError as exc:
        raise CatalogError(f"E5: cannot re-derive ({exc})") from exc
    return EquationSystem.from_equations(
        stored, name="cabello14", names=names, notes="state-independent proof in R^4"
    )


def _singlet5(cabello14: EquationSystem) -> EquationSystem:
    stored = _equations(SINGLET5_DATA, SINGLET5_LABELS)
    source = cabello14.subsystem(
        [cabello14.equation_index("E5"), cabello14.equation_index("E4")]
    )
    reduced = state_substitution(replace(source, state_name="singlet", notes=""), SINGLET)
    if len(reduced.equations) != 2 or reduced.contradictions:
        raise CatalogError("state substitution of E5, E4 did not leave two equations")
    for mine, derived in zip(stored[:2], reduced.equations):
        _expect(mine, derived)
    relation, _ = build_singlet_relation(stored[2].lhs, "E8")
    _expect(stored[2], relation)
    names = {r: cabello14.name_of(r) for r in cabello14.rays}
    return EquationSystem.from_equations(
        stored,
        name="singlet5",
        state=SINGLET,
        state_name="singlet",
        names=names,
        forced=reduced.forced,
        notes=f"state-specific proof in the singlet state\n{reduced.notes}",
    )


@lru_cache(maxsize=1)
def catalog() -> tuple[ProofEntry, ...]:
    """The built-in proofs, verified against their geometric derivations."""
    c14 = _cabello14()
    s5 = _singlet5(c14)
    return (
        ProofEntry("cabello14", c14, ProofKind.STATE_INDEPENDENT,
                   "14 rays, 5 equations; every ray appears twice, constants sum to 1"),
        ProofEntry("singlet5", s5, ProofKind.STATE_SPECIFIC,
                   "5 rays, 3 equations in the singlet state; constants sum to 3"),
    )


def get_entry(name: str) -> ProofEntry:
    for entry in catalog():
        if entry.name == name:
            return entry
    raise KeyError(f"no catalog entry named {name!r}")


def shipped_document(name: str) -> str:
    """Text of the ``.bks`` file shipped for catalog entry ``name``."""
    return resources.files("bkscheck").joinpath("data", f"{name}.bks").read_text()
