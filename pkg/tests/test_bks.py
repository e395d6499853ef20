from dataclasses import replace
from fractions import Fraction

import pytest

from bkscheck import bks
from bkscheck.bks import (
    SINGLET,
    CountMode,
    ModeMismatch,
    NotACrossProductFamily,
    NotFactorizable,
    ProofKind,
    build_singlet_relation,
    catalog,
    condition_d_check,
    count_propositions,
    lift_system,
    merit_ratio,
    simultaneously_measurable,
    singlet_sum_table,
    state_substitution,
    verify_system,
)
from bkscheck.constraints import (
    EquationSystem,
    ValueEquation,
    Verdict,
    backtrack_solve,
    brute_force,
    find_parity_certificate,
    verify_parity_certificate,
)
from bkscheck.rays import DimensionMismatch, NotOrthogonal, ray

E8_RAYS = [ray(1, -1, 0, 0), ray(0, 0, 1, 1), ray(1, 0, 1, 0), ray(0, 1, 0, -1)]


def test_catalog_shape(cabello14, singlet5):
    names = [e.name for e in catalog()]
    assert names[:2] == ["cabello14", "singlet5"]
    assert len(cabello14.rays) == 14 and len(cabello14.equations) == 5
    assert cabello14.state is None
    for eq in cabello14.equations:
        if eq.constant == 0:
            assert len(eq.lhs) == len(eq.rhs) == 3
    assert len(singlet5.rays) == 5 and len(singlet5.equations) == 3
    assert sum(eq.constant for eq in singlet5.equations) == 3
    assert singlet5.state == SINGLET
    assert bks.get_entry("singlet5").kind is ProofKind.STATE_SPECIFIC


def test_every_ray_appears_twice(cabello14, singlet5):
    for system in (cabello14, singlet5):
        for r in system.rays:
            assert sum((r in eq.lhs) + (r in eq.rhs) for eq in system.equations) == 2


def test_catalog_entries_unsat_with_certificates():
    for entry in catalog():
        s = entry.system
        assert brute_force(s).verdict is Verdict.UNSAT
        assert backtrack_solve(s).verdict is Verdict.UNSAT
        cert = find_parity_certificate(s)
        assert cert is not None and verify_parity_certificate(s, cert)


@pytest.mark.parametrize("name", ["cabello14", "singlet5"])
def test_minimality(name):
    s = bks.get_entry(name).system
    for i in range(len(s.equations)):
        variant = s.drop_equation(i)
        out = backtrack_solve(variant)
        assert out.verdict is Verdict.SAT
        assert variant.check_assignment(out.witness)


def test_catalog_detects_transcription_drift(monkeypatch):
    bad = list(bks.CABELLO14_DATA)
    lhs, rhs, k = bad[0]
    bad[0] = (lhs, rhs[:2] + ((1, 0, 0, -1),), k)
    monkeypatch.setattr(bks, "CABELLO14_DATA", tuple(bad))
    with pytest.raises(bks.CatalogError):
        bks._cabello14()


def test_state_substitution_eq5_eq4(cabello14):
    source = cabello14.subsystem([4, 3])
    out = state_substitution(source, SINGLET)
    e6, e7 = out.equations
    assert set(e6.lhs) == {ray(1, 1, -1, 1), ray(1, -1, 0, 0), ray(0, 0, 1, 1)}
    assert set(e7.lhs) == {ray(1, 1, -1, 1), ray(1, 0, 1, 0), ray(0, 1, 0, -1)}
    assert e6.constant == e7.constant == 1 and not e6.rhs and not e7.rhs
    assert dict(out.forced) == {ray(1, 1, 1, -1): 0, ray(1, 0, 0, 1): 0, SINGLET: 1}
    assert out.state == SINGLET
    assert "v(1,1,1,-1)=0" in out.notes


def test_state_substitution_no_effect():
    a, b = ray(1, 1, -1, 1), ray(1, 0, 1, 0)
    s = EquationSystem.from_equations([ValueEquation((a, b), (), 1, "X")])
    out = state_substitution(s, SINGLET)
    assert out.rays == s.rays and out.equations == s.equations
    with pytest.raises(DimensionMismatch):
        state_substitution(s, ray(1, 0))


def test_state_substitution_full_cabello14(cabello14):
    reduced = state_substitution(cabello14, SINGLET)
    assert SINGLET not in reduced.rays
    assert brute_force(reduced).verdict is Verdict.UNSAT


def test_condition_d():
    e6 = [ray(1, 1, -1, 1), ray(1, -1, 0, 0), ray(0, 0, 1, 1)]
    e7 = [ray(1, 1, -1, 1), ray(1, 0, 1, 0), ray(0, 1, 0, -1)]
    assert condition_d_check(e6, SINGLET)
    assert condition_d_check(e7, SINGLET)
    std = [ray(1, 0, 0, 0), ray(0, 1, 0, 0), ray(0, 0, 1, 0)]
    assert not condition_d_check(std, ray(0, 0, 0, 1))
    with pytest.raises(NotOrthogonal):
        condition_d_check([ray(1, 1, 0, 0), ray(1, 0, 0, 0)], SINGLET)
    with pytest.raises(DimensionMismatch):
        condition_d_check([ray(1, 0)], SINGLET)


def test_singlet_relation_eq8():
    eq, trace = build_singlet_relation(E8_RAYS, "E8")
    assert eq.lhs == tuple(E8_RAYS) and eq.constant == 1
    pairs = [(p1.ray, p2.ray) for p1, p2 in trace.factorizations]
    assert pairs == [
        (ray(1, 0), ray(1, -1)),
        (ray(0, 1), ray(1, 1)),
        (ray(1, 1), ray(1, 0)),
        (ray(1, -1), ray(0, 1)),
    ]
    assert all(p1.particle == 1 and p2.particle == 2 for p1, p2 in trace.factorizations)
    assert trace.grouping == ((ray(1, 0), ray(0, 1)), (ray(1, 1), ray(1, -1)))


def test_singlet_relation_sum_table():
    _, trace = build_singlet_relation(E8_RAYS)
    # oracle: enumerate the four admissible assignments directly
    e, e2, f, f2 = ray(1, 0), ray(0, 1), ray(1, 1), ray(1, -1)
    admissible = [
        {e: a, e2: 1 - a, f: b, f2: 1 - b} for a in (0, 1) for b in (0, 1)
    ]
    rows = singlet_sum_table(trace)
    assert len(rows) == 4
    assert sorted(sorted(v.items()) for v, _ in rows) == sorted(sorted(v.items()) for v in admissible)
    assert all(total == 1 for _, total in rows)


def test_singlet_relation_failures():
    with pytest.raises(NotFactorizable) as info:
        build_singlet_relation([SINGLET] + E8_RAYS[1:])
    assert info.value.ray == SINGLET
    # four product rays that are not a cross-product family
    same_basis = [ray(1, 0, 0, 0), ray(0, 1, 0, 0), ray(0, 0, 1, 0), ray(0, 0, 0, 1)]
    with pytest.raises(NotACrossProductFamily):
        build_singlet_relation(same_basis)
    with pytest.raises(NotACrossProductFamily):
        build_singlet_relation(E8_RAYS[:3])


def test_merit_ratio(cabello14, singlet5):
    assert merit_ratio(cabello14) == Fraction(14, 4)
    assert merit_ratio(singlet5) == Fraction(5, 4)
    assert merit_ratio(lift_system(singlet5, 4)) == Fraction(5, 8)


def test_count_propositions(singlet5, cabello14):
    entry = bks.get_entry("singlet5")
    assert count_propositions(entry, CountMode.CONDITION_D) == 5
    assert count_propositions(entry, "full") == 7
    assert count_propositions(entry, "full-with-state") == 8
    assert count_propositions(bks.get_entry("cabello14"), "condition_d") == 14
    with pytest.raises(ModeMismatch):
        count_propositions(bks.get_entry("cabello14"), "full")
    counts = [count_propositions(singlet5, m) for m in CountMode]
    assert counts == sorted(counts)


def test_lift_invariance(singlet5):
    lifted = lift_system(singlet5, 4)
    assert lifted.dim == 8 and lifted.state.dim == 8
    assert brute_force(lifted).verdict is Verdict.UNSAT
    assert find_parity_certificate(lifted) == find_parity_certificate(singlet5)
    assert count_propositions(lifted, "condition_d") == 5
    assert all(c.ok for c in verify_system(lifted))


def test_simultaneous_measurability(cabello14, singlet5):
    flags = [simultaneously_measurable(eq) for eq in singlet5.equations]
    assert flags == [True, True, False]
    assert simultaneously_measurable(cabello14.equations[4])


def test_verify_system_provenance(cabello14, singlet5):
    kinds = [c.provenance for c in verify_system(cabello14)]
    assert kinds == ["basis-difference"] * 4 + ["basis"]
    kinds = [c.provenance for c in verify_system(singlet5)]
    assert kinds == ["state-derived", "state-derived", "singlet-relation"]


def test_verify_rejects_wrong_state(singlet5):
    other = replace(singlet5, state=ray(1, 0, 0, 0))
    checks = verify_system(other)
    assert not any(c.ok for c in checks)


def test_verify_rejects_corrupted_basis(cabello14):
    eq5 = cabello14.equations[4]
    bad = ValueEquation(eq5.lhs[:3] + (cabello14.rays[0],), (), 1, "E5")
    s = replace(cabello14, equations=cabello14.equations[:4] + (bad,))
    checks = verify_system(s)
    assert [c.label for c in checks if not c.ok] == ["E5"]
