import random

import pytest

from bkscheck.constraints import EquationSystem, ValueEquation, Verdict, brute_force
from bkscheck.export import (
    SupportTooLarge,
    cnf_brute_force,
    cnf_clauses,
    export_cnf,
    export_dot,
    orthogonal_pairs,
    parse_dimacs,
)
from bkscheck.rays import inner, ray

from strategies import random_system, var_ray


def test_dot_cabello14(cabello14):
    dot = export_dot(cabello14)
    nodes = [l for l in dot.splitlines() if "[label=" in l]
    assert len(nodes) == 14
    assert dot == export_dot(cabello14)


def test_dot_single_ray():
    s = EquationSystem(2, (ray(1, 0),), ())
    dot = export_dot(s)
    assert dot.count("[label=") == 1 and "--" not in dot


def test_dot_singlet5_edges(singlet5):
    dot = export_dot(singlet5)
    n = {r: singlet5.name_of(r) for r in singlet5.rays}
    assert f'"{n[ray(1, -1, 0, 0)]}" -- "{n[ray(0, 0, 1, 1)]}"' in dot
    a, b = n[ray(1, -1, 0, 0)], n[ray(1, 0, 1, 0)]
    assert f'"{a}" -- "{b}"' not in dot and f'"{b}" -- "{a}"' not in dot


def test_dot_edges_are_orthogonal_pairs(cabello14):
    edges = {
        tuple(tok.strip('"') for tok in line.strip(" ;").split(" -- "))
        for line in export_dot(cabello14).splitlines()
        if " -- " in line
    }
    expected = {
        (cabello14.names[i], cabello14.names[j])
        for i in range(14) for j in range(i + 1, 14)
        if inner(cabello14.rays[i], cabello14.rays[j]) == 0
    }
    assert edges == expected
    assert len(orthogonal_pairs(cabello14)) == len(expected)


def test_cnf_single_equation():
    a, b = var_ray(0), var_ray(1)
    s = EquationSystem.from_equations([ValueEquation((a, b), (), 1)])
    assert sorted(cnf_clauses(s)) == sorted([[1, 2], [-1, -2]])
    n, clauses = parse_dimacs(export_cnf(s))
    assert n == 2 and len(clauses) == 2


def test_cnf_singlet5(singlet5):
    text = export_cnf(singlet5)
    header = next(l for l in text.splitlines() if l.startswith("p "))
    assert header == f"p cnf 5 {len(cnf_clauses(singlet5))}"
    assert cnf_brute_force(text) is Verdict.UNSAT


def test_cnf_cabello14(cabello14):
    assert cnf_brute_force(export_cnf(cabello14)) is Verdict.UNSAT
    assert cnf_brute_force(export_cnf(cabello14.drop_equation(2))) is Verdict.SAT


def test_cnf_contradiction_gives_empty_clause():
    a = var_ray(0)
    s = EquationSystem(4, (a,), (ValueEquation((), (), 1, "X"),))
    assert cnf_clauses(s) == [[]]
    assert cnf_brute_force(export_cnf(s)) is Verdict.UNSAT


def test_cnf_support_limit():
    rays = [var_ray(k) for k in range(17)]
    s = EquationSystem.from_equations([ValueEquation(tuple(rays), (), 1)])
    with pytest.raises(SupportTooLarge):
        export_cnf(s)


def test_cnf_equisatisfiable_random():
    rng = random.Random(11)
    for _ in range(150):
        s = random_system(rng, 12)
        assert cnf_brute_force(export_cnf(s)) == brute_force(s).verdict


def test_parse_dimacs_errors():
    with pytest.raises(ValueError):
        parse_dimacs("1 2 0\n")
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 3\n1 2 0\n")
