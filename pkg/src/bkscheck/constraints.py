"""Linear 0/1 value-assignment systems over rays.

An equation relates sums of proposition values::

    v(l1) + v(l2) + ... = v(r1) + v(r2) + ... + constant

with every value in {0, 1}.  Equations reference :class:`~bkscheck.rays.Ray`
objects directly, and a system assigns one variable (its ``VarId``, the index
into ``system.rays``) per distinct canonical ray.  A ray therefore carries the
same value in every equation it appears in; noncontextuality is built into the
data layout rather than checked.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .rays import DimensionMismatch, Ray, is_orthogonal_basis

BRUTE_FORCE_LIMIT = 30
_CHUNK_BITS = 16


class ConstraintError(ValueError):
    pass


class NotABasis(ConstraintError):
    pass


class NoCommonRay(ConstraintError):
    pass


class TooLarge(ConstraintError):
    pass


class BadIndex(ConstraintError, IndexError):
    pass


@dataclass(frozen=True)
class ValueEquation:
    """``sum v(lhs) = sum v(rhs) + constant``.

    A ray may not appear twice on the same side, but may appear on both.
    """

    lhs: tuple[Ray, ...]
    rhs: tuple[Ray, ...] = ()
    constant: int = 0
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        for side in (self.lhs, self.rhs):
            if len(set(side)) != len(side):
                raise ConstraintError(f"equation {self.label!r}: repeated ray on one side")
        if self.constant < 0:
            raise ConstraintError(f"equation {self.label!r}: constant must be nonnegative")
        dims = {r.dim for r in self.lhs + self.rhs}
        if len(dims) > 1:
            raise DimensionMismatch(f"equation {self.label!r} mixes dimensions {sorted(dims)}")

    @classmethod
    def normalized(cls, lhs, rhs, constant: int, label: str = "") -> "ValueEquation":
        """Build an equation, swapping sides if needed to keep the constant nonnegative."""
        if constant < 0:
            return cls(tuple(rhs), tuple(lhs), -constant, label)
        return cls(tuple(lhs), tuple(rhs), constant, label)

    @property
    def rays(self) -> tuple[Ray, ...]:
        """Distinct participating rays, lhs first, in order of appearance."""
        return tuple(dict.fromkeys(self.lhs + self.rhs))

    @property
    def is_empty(self) -> bool:
        return not self.lhs and not self.rhs

    def coefficients(self) -> dict[Ray, int]:
        """Net coefficient (lhs count minus rhs count) of every ray, zeros dropped."""
        coef: Counter = Counter(self.lhs)
        coef.subtract(self.rhs)
        return {r: c for r, c in coef.items() if c}

    @property
    def is_contradictory(self) -> bool:
        """True when no 0/1 values can satisfy the equation on its own."""
        coef = self.coefficients().values()
        lo = sum(c for c in coef if c < 0)
        hi = sum(c for c in coef if c > 0)
        return not lo <= self.constant <= hi

    def holds(self, values: Mapping[Ray, int]) -> bool:
        left = sum(values[r] for r in self.lhs)
        right = sum(values[r] for r in self.rhs)
        return left == right + self.constant

    def same_relation(self, other: "ValueEquation") -> bool:
        """Equal as a relation: same ray sets per side and same constant, labels ignored.

        Homogeneous equations also match with their sides swapped.
        """
        if self.constant != other.constant:
            return False
        mine = (frozenset(self.lhs), frozenset(self.rhs))
        if mine == (frozenset(other.lhs), frozenset(other.rhs)):
            return True
        return self.constant == 0 and mine == (frozenset(other.rhs), frozenset(other.lhs))

    def __str__(self):
        left = " + ".join(f"v{r}" for r in self.lhs) or "0"
        right = [f"v{r}" for r in self.rhs]
        if self.constant or not right:
            right.append(str(self.constant))
        prefix = f"{self.label}: " if self.label else ""
        return f"{prefix}{left} = {' + '.join(right)}"


@dataclass(frozen=True)
class EquationSystem:
    """A named set of rays (the variables), equations over them, and an optional state.

    ``forced`` records rays eliminated by substitution together with the value
    they were fixed to; ``names`` gives each ray a label for file output.
    """

    dim: int
    rays: tuple[Ray, ...]
    equations: tuple[ValueEquation, ...]
    name: str = ""
    state: Ray | None = None
    state_name: str = ""
    names: tuple[str, ...] = ()
    forced: tuple[tuple[Ray, int], ...] = ()
    notes: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(self.rays))
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "forced", tuple((r, int(v)) for r, v in self.forced))
        if len(set(self.rays)) != len(self.rays):
            raise ConstraintError("system rays must be distinct")
        for r in self.rays:
            if r.dim != self.dim:
                raise DimensionMismatch(f"{r} does not have dimension {self.dim}")
        if self.state is not None:
            if self.state.dim != self.dim:
                raise DimensionMismatch(f"state {self.state} does not have dimension {self.dim}")
            if not self.state_name:
                object.__setattr__(self, "state_name", "w")
        names = tuple(self.names) or tuple(f"r{i + 1}" for i in range(len(self.rays)))
        if len(names) != len(self.rays) or len(set(names)) != len(names):
            raise ConstraintError("ray names must be distinct, one per ray")
        object.__setattr__(self, "names", names)
        known = set(self.rays)
        for eq in self.equations:
            missing = [r for r in eq.rays if r not in known]
            if missing:
                raise ConstraintError(f"equation {eq.label!r} uses undeclared ray {missing[0]}")

    @classmethod
    def from_equations(
        cls,
        equations: Iterable[ValueEquation],
        *,
        dim: int | None = None,
        name: str = "",
        state: Ray | None = None,
        state_name: str = "",
        names: Mapping[Ray, str] | None = None,
        forced: Iterable[tuple[Ray, int]] = (),
        notes: str = "",
    ) -> "EquationSystem":
        """Collect the rays of ``equations`` in order of first appearance."""
        equations = tuple(equations)
        rays = tuple(dict.fromkeys(r for eq in equations for r in eq.rays))
        if dim is None:
            if rays:
                dim = rays[0].dim
            elif state is not None:
                dim = state.dim
            else:
                raise ConstraintError("cannot infer the dimension of an empty system")
        ray_names = tuple(names[r] for r in rays) if names else ()
        return cls(dim, rays, equations, name, state, state_name, ray_names, tuple(forced), notes)

    @cached_property
    def index(self) -> dict[Ray, int]:
        """VarId of every ray."""
        return {r: i for i, r in enumerate(self.rays)}

    @property
    def num_vars(self) -> int:
        return len(self.rays)

    def name_of(self, r: Ray) -> str:
        return self.names[self.index[r]]

    def var(self, key: Union[int, Ray]) -> int:
        """Resolve a VarId or a ray to a VarId."""
        if isinstance(key, Ray):
            if key not in self.index:
                raise BadIndex(f"{key} is not a variable of {self.name or 'the system'}")
            return self.index[key]
        if not 0 <= key < len(self.rays):
            raise BadIndex(f"no variable with index {key}")
        return key

    def rows(self) -> list[tuple[dict[int, int], int]]:
        """Each equation as ``({var: coefficient}, constant)``."""
        return [
            ({self.index[r]: c for r, c in eq.coefficients().items()}, eq.constant)
            for eq in self.equations
        ]

    def used_rays(self) -> tuple[Ray, ...]:
        """Rays occurring in at least one equation, in system order."""
        used = {r for eq in self.equations for r in eq.rays}
        return tuple(r for r in self.rays if r in used)

    @property
    def contradictions(self) -> tuple[int, ...]:
        """Indices of equations that are unsatisfiable on their own."""
        return tuple(i for i, eq in enumerate(self.equations) if eq.is_contradictory)

    def label(self, i: int) -> str:
        return self.equations[i].label or f"#{i + 1}"

    def equation_index(self, label: str) -> int:
        for i, eq in enumerate(self.equations):
            if eq.label == label:
                return i
        raise BadIndex(f"no equation labelled {label!r}")

    def subsystem(self, indices: Sequence[int], *, prune: bool = True, name: str | None = None):
        """Keep the equations at ``indices`` (in that order).

        With ``prune`` the rays no longer used by any equation are dropped.
        """
        for i in indices:
            if not 0 <= i < len(self.equations):
                raise BadIndex(f"no equation with index {i}")
        eqs = tuple(self.equations[i] for i in indices)
        keep = self.rays
        if prune:
            used = {r for eq in eqs for r in eq.rays}
            keep = tuple(r for r in self.rays if r in used)
        return replace(
            self,
            rays=keep,
            equations=eqs,
            names=tuple(self.name_of(r) for r in keep),
            name=self.name if name is None else name,
        )

    def drop_equation(self, i: int) -> "EquationSystem":
        """The system without equation ``i``; the variables are kept."""
        rest = [j for j in range(len(self.equations)) if j != i]
        if len(rest) == len(self.equations):
            raise BadIndex(f"no equation with index {i}")
        return self.subsystem(rest, prune=False, name=f"{self.name}-drop-{self.label(i)}")

    def values_by_ray(self, values: Sequence[int]) -> dict[Ray, int]:
        if len(values) != len(self.rays):
            raise ConstraintError("assignment must give a value to every variable")
        return dict(zip(self.rays, values))

    def check_assignment(self, values: Sequence[int]) -> bool:
        """Substitute a full assignment (indexed by VarId) into every equation."""
        by_ray = self.values_by_ray(values)
        return all(eq.holds(by_ray) for eq in self.equations)


def build_basis_equation(rays: Sequence[Ray], dim: int, label: str = "") -> ValueEquation:
    """``sum v(rays) = 1`` for an orthogonal basis."""
    try:
        ok = is_orthogonal_basis(rays, dim)
    except DimensionMismatch as exc:
        raise NotABasis(str(exc)) from exc
    if not ok:
        raise NotABasis(f"{', '.join(map(str, rays))} is not an orthogonal basis of R^{dim}")
    return ValueEquation(tuple(rays), (), 1, label)


def build_difference_equation(
    basis_a: Sequence[Ray], basis_b: Sequence[Ray], dim: int, label: str = ""
) -> ValueEquation:
    """Cancel the rays shared by two bases and equate the value sums of the rest."""
    for basis in (basis_a, basis_b):
        build_basis_equation(basis, dim)
    shared = set(basis_a) & set(basis_b)
    if not shared:
        raise NoCommonRay("the two bases share no ray")
    lhs = tuple(r for r in basis_a if r not in shared)
    rhs = tuple(r for r in basis_b if r not in shared)
    return ValueEquation(lhs, rhs, 0, label)


class Verdict(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SolverOutcome:
    """Solver result.  ``witness`` holds one 0/1 value per VarId and is set iff SAT."""

    verdict: Verdict
    witness: tuple[int, ...] | None
    nodes_explored: int

    @property
    def satisfiable(self) -> bool:
        return self.verdict is Verdict.SAT


def _coefficient_matrix(system: EquationSystem) -> tuple[np.ndarray, np.ndarray]:
    n = system.num_vars
    rows = system.rows()
    a = np.zeros((len(rows), n), dtype=np.int64)
    c = np.zeros(len(rows), dtype=np.int64)
    for i, (coef, const) in enumerate(rows):
        for v, k in coef.items():
            a[i, v] = k
        c[i] = const
    return a, c


def brute_force(system: EquationSystem, limit: int = BRUTE_FORCE_LIMIT) -> SolverOutcome:
    """Enumerate every assignment in lexicographic order.

    Variable 0 is the most significant position and 0 comes before 1, so the
    witness is the lexicographically first satisfying assignment.  On UNSAT,
    ``nodes_explored`` is ``2**n``; on SAT it is the witness rank plus one.
    """
    n = system.num_vars
    if n > limit:
        raise TooLarge(f"{n} variables exceeds the brute-force limit of {limit}")
    a, c = _coefficient_matrix(system)
    total = 1 << n
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    chunk = 1 << _CHUNK_BITS
    for start in range(0, total, chunk):
        ks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = (ks[:, None] >> shifts) & 1
        ok = np.all(bits @ a.T == c, axis=1) if len(c) else np.ones(len(ks), dtype=bool)
        hits = np.flatnonzero(ok)
        if hits.size:
            k = int(ks[hits[0]])
            witness = tuple((k >> (n - 1 - i)) & 1 for i in range(n))
            return SolverOutcome(Verdict.SAT, witness, k + 1)
    return SolverOutcome(Verdict.UNSAT, None, total)


def _propagate(rows, values: list) -> bool:
    """Apply bound propagation to a fixpoint; False on conflict."""
    changed = True
    while changed:
        changed = False
        for coef, const in rows:
            residual = const
            lo = hi = 0
            free = []
            for v, k in coef.items():
                if values[v] is None:
                    free.append((v, k))
                    if k > 0:
                        hi += k
                    else:
                        lo += k
                else:
                    residual -= k * values[v]
            if residual < lo or residual > hi:
                return False
            if free and (residual == hi or residual == lo):
                at_max = residual == hi
                for v, k in free:
                    values[v] = int((k > 0) == at_max)
                changed = True
    return True


def backtrack_solve(system: EquationSystem) -> SolverOutcome:
    """Depth-first search with bound propagation.

    Branches on the unassigned variable occurring in the most unresolved
    equations (ties to the lowest VarId), trying 0 before 1.  Variables that
    occur in no equation are set to 0 in the witness.
    """
    rows = system.rows()
    n = system.num_vars
    nodes = 0

    def search(values):
        nonlocal nodes
        nodes += 1
        if not _propagate(rows, values):
            return None
        counts = [0] * n
        for coef, _ in rows:
            open_vars = [v for v in coef if values[v] is None]
            for v in open_vars:
                counts[v] += 1
        best = max(range(n), key=lambda v: (counts[v], -v), default=None)
        if best is None or counts[best] == 0:
            return tuple(0 if x is None else x for x in values)
        for choice in (0, 1):
            child = list(values)
            child[best] = choice
            found = search(child)
            if found is not None:
                return found
        return None

    witness = search([None] * n)
    if witness is None:
        return SolverOutcome(Verdict.UNSAT, None, nodes)
    return SolverOutcome(Verdict.SAT, witness, nodes)


@dataclass(frozen=True)
class ParityCertificate:
    """Equations whose sum is ``0 = 1`` modulo 2."""

    equation_indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(self.equation_indices)))
        if not idx:
            raise ConstraintError("a parity certificate needs at least one equation")
        object.__setattr__(self, "equation_indices", idx)

    def labels(self, system: EquationSystem) -> list[str]:
        return [system.label(i) for i in self.equation_indices]


def _parity_row(system: EquationSystem, eq: ValueEquation) -> int:
    mask = 0
    for r, c in eq.coefficients().items():
        if c % 2:
            mask |= 1 << system.index[r]
    return mask


def find_parity_certificate(system: EquationSystem) -> ParityCertificate | None:
    """Search the GF(2) left kernel of the equations for an odd-constant element.

    Each equation becomes a bit row of variable parities plus a constant
    parity.  Rows are reduced against earlier pivots while tracking which
    original equations were combined; a row that vanishes with an odd
    constant is a certificate.  Kernel elements with even constant span a
    subspace closed under addition, so if every one found is even there is no
    certificate at all.  No minimality is claimed.
    """
    pivots: dict[int, tuple[int, int, int]] = {}
    for i, eq in enumerate(system.equations):
        mask, parity, combo = _parity_row(system, eq), eq.constant & 1, 1 << i
        while mask:
            top = mask.bit_length() - 1
            if top not in pivots:
                pivots[top] = (mask, parity, combo)
                break
            pmask, pparity, pcombo = pivots[top]
            mask ^= pmask
            parity ^= pparity
            combo ^= pcombo
        if not mask and parity:
            return ParityCertificate(tuple(j for j in range(i + 1) if combo >> j & 1))
    return None


def verify_parity_certificate(system: EquationSystem, cert: ParityCertificate) -> bool:
    """Check every net variable coefficient is even and the summed constant odd."""
    net: Counter = Counter()
    constant = 0
    for i in cert.equation_indices:
        if not 0 <= i < len(system.equations):
            raise BadIndex(f"certificate references equation {i}, system has {len(system.equations)}")
        eq = system.equations[i]
        net.update(eq.coefficients())
        constant += eq.constant
    return constant % 2 == 1 and all(c % 2 == 0 for c in net.values())


def substitute(system: EquationSystem, fixed: Mapping[Union[int, Ray], int]) -> EquationSystem:
    """Eliminate variables with fixed values.

    Keys may be VarIds or rays.  Equations reduced to ``0 = 0`` are dropped;
    contradictory ones stay in place and show up in ``system.contradictions``.
    The eliminated rays are appended to ``forced``.
    """
    values: dict[Ray, int] = {}
    for key, val in fixed.items():
        if val not in (0, 1):
            raise ValueError(f"fixed values must be 0 or 1, got {val!r}")
        values[system.rays[system.var(key)]] = int(val)
    if not values:
        return system
    equations = []
    for eq in system.equations:
        constant = eq.constant
        constant -= sum(values.get(r, 0) for r in eq.lhs)
        constant += sum(values.get(r, 0) for r in eq.rhs)
        lhs = [r for r in eq.lhs if r not in values]
        rhs = [r for r in eq.rhs if r not in values]
        if not lhs and not rhs and constant == 0:
            continue
        equations.append(ValueEquation.normalized(lhs, rhs, constant, eq.label))
    keep = tuple(r for r in system.rays if r not in values)
    forced = tuple((r, values[r]) for r in system.rays if r in values)
    return replace(
        system,
        rays=keep,
        equations=tuple(equations),
        names=tuple(system.name_of(r) for r in keep),
        forced=system.forced + forced,
    )
