"""JSON problem documents and the JSON shapes of results.

Problem schema::

    {"group": {"moduli": [4]},
     "subgroup_H": {"generators": [[2]]},
     "measure": {"atoms": [{"point": [0], "weight": "1/2"}]},
     "transversal": [[0], [1]]}            # optional

Weights are ``"p/q"`` strings, integers or decimal literals, all read exactly.
"""

from __future__ import annotations

import json
from decimal import Decimal
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Optional

from .group_core import (
    Element,
    FiniteAbelianGroup,
    GroupError,
    Subgroup,
    Transversal,
    annihilator,
    canonical_transversal,
    is_transversal,
    make_group,
    subgroup_generate,
)
from .lp_spaces import FunctionOnAtoms
from .measure import AtomicMeasure, MeasureError, to_rational


class ProblemError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ProblemSpec:
    moduli: tuple[int, ...]
    generators: tuple[Element, ...]
    atoms: tuple[tuple[Element, Fraction], ...]
    transversal: Optional[Transversal] = None

    @cached_property
    def group(self) -> FiniteAbelianGroup:
        return make_group(self.moduli)

    @cached_property
    def H(self) -> Subgroup:
        return subgroup_generate(self.group, self.generators)

    @cached_property
    def lam(self) -> Subgroup:
        return annihilator(self.group, self.H)

    @cached_property
    def T(self) -> Transversal:
        if self.transversal is not None:
            return self.transversal
        return canonical_transversal(self.group, self.lam)

    @cached_property
    def mu(self) -> AtomicMeasure:
        return AtomicMeasure(self.group, dict(self.atoms))

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "group": {"moduli": list(self.moduli)},
            "subgroup_H": {"generators": [list(g) for g in self.generators]},
            "measure": {
                "atoms": [{"point": list(p), "weight": str(w)} for p, w in self.atoms]
            },
        }
        if self.transversal is not None:
            doc["transversal"] = [list(t) for t in self.transversal]
        return doc


def _expect(cond: bool, field: str, message: str) -> None:
    if not cond:
        raise ProblemError(field, message)


def _int_list(value: Any, field: str) -> list[int]:
    _expect(isinstance(value, list), field, "expected a list of integers")
    for v in value:
        _expect(isinstance(v, int) and not isinstance(v, bool), field, f"{v!r} is not an integer")
    return value


def _element(group: FiniteAbelianGroup, value: Any, field: str) -> Element:
    try:
        return group.check(_int_list(value, field))
    except GroupError as exc:
        raise ProblemError(field, str(exc)) from exc


def parse_problem(text: str) -> ProblemSpec:
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ProblemError("document", f"invalid JSON ({exc})") from exc
    _expect(isinstance(doc, dict), "document", "top level must be an object")
    unknown = set(doc) - {"group", "subgroup_H", "measure", "transversal"}
    _expect(not unknown, "document", f"unknown fields {sorted(unknown)}")

    grp = doc.get("group")
    _expect(isinstance(grp, dict) and "moduli" in grp, "group.moduli", "missing")
    moduli = _int_list(grp["moduli"], "group.moduli")
    try:
        group = make_group(moduli)
    except GroupError as exc:
        raise ProblemError("group.moduli", str(exc)) from exc

    sub = doc.get("subgroup_H")
    _expect(isinstance(sub, dict) and "generators" in sub, "subgroup_H.generators", "missing")
    gens_raw = sub["generators"]
    _expect(isinstance(gens_raw, list), "subgroup_H.generators", "expected a list of elements")
    gens = tuple(
        _element(group, g, f"subgroup_H.generators[{i}]") for i, g in enumerate(gens_raw)
    )

    meas = doc.get("measure")
    _expect(isinstance(meas, dict) and "atoms" in meas, "measure.atoms", "missing")
    _expect(isinstance(meas["atoms"], list), "measure.atoms", "expected a list of atoms")
    atoms: dict[Element, Fraction] = {}
    for i, rec in enumerate(meas["atoms"]):
        field = f"measure.atoms[{i}]"
        _expect(isinstance(rec, dict) and {"point", "weight"} <= set(rec), field, "needs point and weight")
        p = _element(group, rec["point"], field + ".point")
        _expect(p not in atoms, field + ".point", f"duplicate atom {list(p)}")
        raw = rec["weight"]
        _expect(isinstance(raw, (str, int, Decimal)) and not isinstance(raw, bool), field + ".weight", "not a number")
        try:
            w = to_rational(raw)
        except MeasureError as exc:
            raise ProblemError(field + ".weight", str(exc)) from exc
        _expect(w > 0, field + ".weight", f"weight must be positive, got {w}")
        atoms[p] = w

    transversal = None
    if doc.get("transversal") is not None:
        raw_t = doc["transversal"]
        _expect(isinstance(raw_t, list), "transversal", "expected a list of elements")
        transversal = tuple(
            sorted(_element(group, t, f"transversal[{i}]") for i, t in enumerate(raw_t))
        )

    spec = ProblemSpec(tuple(moduli), gens, tuple(sorted(atoms.items())), transversal)
    if transversal is not None:
        _expect(
            is_transversal(group, spec.lam, transversal),
            "transversal",
            "does not meet every coset of the annihilator exactly once",
        )
    return spec


def parse_function(text: str, mu: AtomicMeasure) -> FunctionOnAtoms:
    """Read ``[{"point": [..], "re": x, "im": y}, ...]``; unlisted atoms are 0."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError("function", f"invalid JSON ({exc})") from exc
    _expect(isinstance(doc, list), "function", "expected a list of records")
    values = {p: 0j for p in mu.support}
    for i, rec in enumerate(doc):
        field = f"function[{i}]"
        _expect(isinstance(rec, dict) and "point" in rec, field, "needs a point")
        p = _element(mu.group, rec["point"], field + ".point")
        _expect(p in values, field + ".point", f"{list(p)} is not an atom of the measure")
        re, im = rec.get("re", 0), rec.get("im", 0)
        for name, v in (("re", re), ("im", im)):
            _expect(isinstance(v, (int, float)) and not isinstance(v, bool), f"{field}.{name}", "not a number")
        values[p] = complex(re, im)
    return FunctionOnAtoms(mu, values)


def element_json(e: Element) -> list[int]:
    return list(e)


def elements_json(es: Iterable[Element]) -> list[list[int]]:
    return [list(e) for e in sorted(es)]


def measure_json(mu: AtomicMeasure) -> dict[str, Any]:
    return {"atoms": [{"point": list(p), "weight": str(w)} for p, w in mu.atoms.items()]}


def function_json(f: FunctionOnAtoms) -> list[dict[str, Any]]:
    return [{"point": list(p), "re": v.real, "im": v.imag} for p, v in f.values.items()]
