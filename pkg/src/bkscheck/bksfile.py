"""The line-oriented ``.bks`` system format.

Grammar (one directive per line, ``#`` starts a comment)::

    name NAME                        optional system name
    dim N                            required, before any ray or state
    ray NAME c1 ... cN               components are integers or p/q rationals
    state NAME c1 ... cN             optional prepared state
    forced c1 ... cN = V             ray eliminated by substitution, V in {0, 1}
    eq [LABEL:] SIDE = SIDE          SIDE is NAME/INTEGER terms joined by '+'

Integers on either side of an equation are moved into the right-hand
constant.  Equations without a label get ``E<k>`` for the k-th equation.
Names and labels match ``[A-Za-z_][A-Za-z0-9_.'-]*``.
"""

from __future__ import annotations

import re

from . import rays as _rays
from .constraints import ConstraintError, EquationSystem, ValueEquation
from .rays import Ray, RayError, canonicalize

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.'-]*\Z")
_INT_RE = re.compile(r"[+-]?\d+\Z")


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


class DuplicateRay(ParseError):
    pass


class UnknownName(ParseError):
    pass


class DimensionMismatch(ParseError, _rays.DimensionMismatch):
    pass


def _components(tokens: list[str], dim: int | None, lineno: int) -> Ray:
    if dim is None:
        raise ParseError("'dim' must come before rays and states", lineno)
    if len(tokens) != dim:
        raise DimensionMismatch(f"expected {dim} components, got {len(tokens)}", lineno)
    try:
        return canonicalize(tokens)
    except (RayError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad components {' '.join(tokens)}: {exc}", lineno) from None


def _check_name(name: str, lineno: int, what: str = "name") -> str:
    if not NAME_RE.match(name):
        raise ParseError(f"invalid {what} {name!r}", lineno)
    return name


def _side(text: str, lineno: int) -> tuple[list[str], int]:
    text = text.strip()
    if not text:
        raise ParseError("empty side in equation", lineno)
    names, constant = [], 0
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise ParseError("dangling '+' in equation", lineno)
        if _INT_RE.match(term):
            constant += int(term)
        else:
            names.append(_check_name(term, lineno))
    return names, constant


def parse_system(text: str, name: str = "") -> EquationSystem:
    """Parse a ``.bks`` document into an :class:`EquationSystem`."""
    dim = None
    sys_name = name
    ray_names: list[str] = []
    by_name: dict[str, Ray] = {}
    owner: dict[Ray, str] = {}
    state = None
    state_name = ""
    forced: list[tuple[Ray, int]] = []
    equations: list[ValueEquation] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        tokens = rest.split()
        if keyword == "name":
            if len(tokens) != 1:
                raise ParseError("usage: name NAME", lineno)
            sys_name = _check_name(tokens[0], lineno)
        elif keyword == "dim":
            if dim is not None:
                raise ParseError("'dim' given twice", lineno)
            if len(tokens) != 1 or not tokens[0].isdigit() or int(tokens[0]) < 1:
                raise ParseError("usage: dim N with N >= 1", lineno)
            dim = int(tokens[0])
        elif keyword == "ray":
            if len(tokens) < 2:
                raise ParseError("usage: ray NAME c1 ... cN", lineno)
            rname = _check_name(tokens[0], lineno)
            if rname in by_name:
                raise ParseError(f"ray name {rname!r} defined twice", lineno)
            r = _components(tokens[1:], dim, lineno)
            if r in owner:
                raise DuplicateRay(f"{rname} is the same ray {r} as {owner[r]}", lineno)
            by_name[rname] = r
            owner[r] = rname
            ray_names.append(rname)
        elif keyword == "state":
            if state is not None:
                raise ParseError("'state' given twice", lineno)
            if len(tokens) < 2:
                raise ParseError("usage: state NAME c1 ... cN", lineno)
            state_name = _check_name(tokens[0], lineno)
            state = _components(tokens[1:], dim, lineno)
        elif keyword == "forced":
            comps, eq_sign, value = rest.partition("=")
            if not eq_sign or value.strip() not in ("0", "1"):
                raise ParseError("usage: forced c1 ... cN = 0|1", lineno)
            forced.append((_components(comps.split(), dim, lineno), int(value)))
        elif keyword == "eq":
            label = f"E{len(equations) + 1}"
            body = rest
            head, colon, tail = rest.partition(":")
            if colon:
                label = _check_name(head.strip(), lineno, "label")
                body = tail
            if any(eq.label == label for eq in equations):
                raise ParseError(f"equation label {label!r} used twice", lineno)
            if body.count("=") != 1:
                raise ParseError("an equation needs exactly one '='", lineno)
            left, right = body.split("=")
            lnames, lconst = _side(left, lineno)
            rnames, rconst = _side(right, lineno)
            for side in (lnames, rnames):
                if len(set(side)) != len(side):
                    raise ParseError(f"equation {label}: a ray repeats on one side", lineno)
            for n in lnames + rnames:
                if n not in by_name:
                    raise UnknownName(f"unknown ray {n!r}", lineno)
            try:
                equations.append(
                    ValueEquation.normalized(
                        [by_name[n] for n in lnames],
                        [by_name[n] for n in rnames],
                        rconst - lconst,
                        label,
                    )
                )
            except ConstraintError as exc:
                raise ParseError(str(exc), lineno) from None
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno)

    if dim is None:
        raise ParseError("missing 'dim' line")
    return EquationSystem(
        dim,
        tuple(by_name[n] for n in ray_names),
        tuple(equations),
        name=sys_name,
        state=state,
        state_name=state_name,
        names=tuple(ray_names),
        forced=tuple(forced),
    )


def _fmt(r: Ray) -> str:
    return " ".join(str(c) for c in r.components)


def _fmt_side(names: list[str], constant: int) -> str:
    terms = names + ([str(constant)] if constant or not names else [])
    return " + ".join(terms)


def serialize_system(system: EquationSystem) -> str:
    """Render a system as a ``.bks`` document; inverse of :func:`parse_system`."""
    out = []
    if system.name:
        out.append(f"name {system.name}")
    out.append(f"dim {system.dim}")
    for n, r in zip(system.names, system.rays):
        out.append(f"ray {n} {_fmt(r)}")
    if system.state is not None:
        out.append(f"state {system.state_name} {_fmt(system.state)}")
    for r, v in system.forced:
        out.append(f"forced {_fmt(r)} = {v}")
    for i, eq in enumerate(system.equations):
        left = _fmt_side([system.name_of(r) for r in eq.lhs], 0)
        right = _fmt_side([system.name_of(r) for r in eq.rhs], eq.constant)
        out.append(f"eq {eq.label or f'E{i + 1}'}: {left} = {right}")
    return "\n".join(out) + "\n"
