"""Human-readable verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .bks import (
    CountMode,
    EquationCheck,
    ModeMismatch,
    count_propositions,
    merit_ratio,
    simultaneously_measurable,
    verify_system,
)
from .constraints import (
    BRUTE_FORCE_LIMIT,
    EquationSystem,
    ParityCertificate,
    SolverOutcome,
    backtrack_solve,
    brute_force,
    find_parity_certificate,
    verify_parity_certificate,
)


@dataclass(frozen=True)
class Report:
    system: EquationSystem
    checks: tuple[EquationCheck, ...]
    measurable: tuple[bool, ...]
    outcome: SolverOutcome
    brute: SolverOutcome | None
    certificate: ParityCertificate | None
    counts: dict[str, int]
    merit: Fraction

    @property
    def structurally_sound(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        s = self.system
        return {
            "name": s.name,
            "dim": s.dim,
            "rays": len(s.rays),
            "state": None if s.state is None else list(s.state.components),
            "equations": [
                {
                    "label": c.label,
                    "provenance": c.provenance,
                    "detail": c.detail,
                    "simultaneously_measurable": m,
                }
                for c, m in zip(self.checks, self.measurable)
            ],
            "verdict": self.outcome.verdict.value,
            "nodes_explored": self.outcome.nodes_explored,
            "brute_force_nodes": None if self.brute is None else self.brute.nodes_explored,
            "witness": None if self.outcome.witness is None else list(self.outcome.witness),
            "parity_certificate": (
                None if self.certificate is None else self.certificate.labels(s)
            ),
            "counts": self.counts,
            "merit_ratio": str(self.merit),
        }


def build_report(system: EquationSystem) -> Report:
    outcome = backtrack_solve(system)
    brute = brute_force(system) if system.num_vars <= BRUTE_FORCE_LIMIT else None
    if brute is not None and brute.verdict != outcome.verdict:
        raise AssertionError("solvers disagree; this is a bug")
    cert = find_parity_certificate(system)
    if cert is not None and not verify_parity_certificate(system, cert):
        cert = None
    counts = {}
    for mode in CountMode:
        try:
            counts[mode.value] = count_propositions(system, mode)
        except ModeMismatch:
            pass
    return Report(
        system,
        tuple(verify_system(system)),
        tuple(simultaneously_measurable(eq) for eq in system.equations),
        outcome,
        brute,
        cert,
        counts,
        merit_ratio(system),
    )


def render_text(report: Report) -> str:
    s = report.system
    out = [f"system: {s.name or '(unnamed)'}", f"dimension: {s.dim}", f"rays: {len(s.rays)}"]
    if s.state is not None:
        out.append(f"state: {s.state_name} {s.state}")
    out.append("")
    out.append("label\tprovenance\tsimultaneously_measurable\tdetail")
    for check, m in zip(report.checks, report.measurable):
        prov = check.provenance or "UNPROVEN"
        out.append(f"{check.label}\t{prov}\t{'yes' if m else 'no'}\t{check.detail}")
    out.append("")
    line = f"verdict: {report.outcome.verdict} (backtrack nodes {report.outcome.nodes_explored}"
    if report.brute is not None:
        line += f", brute-force assignments {report.brute.nodes_explored}"
    out.append(line + ")")
    if report.certificate is not None:
        out.append("parity certificate: " + ", ".join(report.certificate.labels(s)))
    else:
        out.append("parity certificate: none")
    for mode, n in report.counts.items():
        out.append(f"count[{mode}]: {n}")
    out.append(f"merit ratio f/n: {report.merit}")
    return "\n".join(out) + "\n"


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"
