"""Graph and CNF views of an equation system."""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .constraints import EquationSystem, Verdict
from .rays import inner

CNF_SUPPORT_LIMIT = 16


class SupportTooLarge(ValueError):
    pass


def orthogonal_pairs(system: EquationSystem) -> list[tuple[int, int]]:
    """VarId pairs of mutually orthogonal rays, in lexicographic order."""
    return [
        (i, j)
        for (i, a), (j, b) in combinations(enumerate(system.rays), 2)
        if inner(a, b) == 0
    ]


def export_dot(system: EquationSystem) -> str:
    """Orthogonality graph in Graphviz DOT: one node per ray, one edge per orthogonal pair."""
    title = system.name or "rays"
    lines = [f'graph "{title}" {{']
    for n, r in zip(system.names, system.rays):
        lines.append(f'  "{n}" [label="{r}"];')
    for i, j in orthogonal_pairs(system):
        lines.append(f'  "{system.names[i]}" -- "{system.names[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cnf_clauses(system: EquationSystem) -> list[list[int]]:
    """One blocking clause per assignment of an equation's support that violates it.

    Variable ``i + 1`` encodes VarId ``i``.  An equation that fails for every
    assignment of an empty support yields the empty clause.
    """
    clauses = []
    for (coef, const), eq in zip(system.rows(), system.equations):
        support = sorted(coef)
        if len(support) > CNF_SUPPORT_LIMIT:
            raise SupportTooLarge(
                f"equation {eq.label!r} has support {len(support)} > {CNF_SUPPORT_LIMIT}"
            )
        for bits in product((0, 1), repeat=len(support)):
            if sum(coef[v] * b for v, b in zip(support, bits)) != const:
                clauses.append([-(v + 1) if b else v + 1 for v, b in zip(support, bits)])
    return clauses


def export_cnf(system: EquationSystem) -> str:
    """DIMACS CNF that is satisfiable iff the system is."""
    clauses = cnf_clauses(system)
    lines = [f"c {system.name or 'system'}: variable k is ray k-1"]
    for i, (n, r) in enumerate(zip(system.names, system.rays)):
        lines.append(f"c {i + 1} {n} {r}")
    lines.append(f"p cnf {system.num_vars} {len(clauses)}")
    lines.extend(" ".join(map(str, c + [0])) for c in clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Read a DIMACS CNF; returns ``(num_vars, clauses)``."""
    num_vars = None
    declared = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if num_vars is None:
        raise ValueError("missing 'p cnf' line")
    if declared != len(clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(clauses)}")
    return num_vars, clauses


def cnf_brute_force(text: str, limit: int = 24) -> Verdict:
    """Decide a DIMACS CNF by trying every assignment."""
    n, clauses = parse_dimacs(text)
    if n > limit:
        raise ValueError(f"{n} variables is too many to enumerate")
    ks = np.arange(1 << n, dtype=np.int64)
    alive = np.ones(ks.shape, dtype=bool)
    for clause in clauses:
        sat = np.zeros(ks.shape, dtype=bool)
        for lit in clause:
            bit = (ks >> (abs(lit) - 1)) & 1
            sat |= bit == (1 if lit > 0 else 0)
        alive &= sat
        if not alive.any():
            return Verdict.UNSAT
    return Verdict.SAT if alive.any() else Verdict.UNSAT
