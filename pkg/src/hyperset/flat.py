"""Flat systems of equations and their unique (anti-foundation) solution.

A flat system assigns every indeterminate x an equation x = S_x where
S_x mixes indeterminate names and named atoms (pre-constructed sets of
the ambient universe).  Solving builds one picture node per
indeterminate and delegates to the universe's bisimulation collapse,
which is exactly what makes the solution unique.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .universe import SetId, Universe


@dataclass
class FlatSystem:
    """Equations are kept as an ordered list so duplicates stay visible
    to :func:`validate`; a well-formed system has exactly one equation
    per indeterminate."""

    atoms: dict[str, SetId] = field(default_factory=dict)
    equations: list[tuple[str, frozenset[str]]] = field(default_factory=list)

    def indeterminates(self) -> list[str]:
        return [name for name, _ in self.equations]


def validate(sys: FlatSystem) -> list[str]:
    """All invariant violations, each naming the offending equation."""
    problems = []
    seen = set()
    for name, _ in sys.equations:
        if name in seen:
            problems.append(f"duplicate equation for {name}")
        seen.add(name)
        if name in sys.atoms:
            problems.append(f"{name} is declared both as atom and indeterminate")
    for name, rhs in sys.equations:
        for ref in sorted(rhs):
            if ref not in seen and ref not in sys.atoms:
                problems.append(f"equation for {name} mentions undeclared name {ref}")
    return problems


def solve(u: Universe, sys: FlatSystem) -> dict[str, SetId]:
    """Unique solution of the system, one canonical handle per name.

    Raises ValidationError when the system breaks its invariants.
    """
    problems = validate(sys)
    if problems:
        raise ValidationError("; ".join(problems))
    names = sys.indeterminates()
    index = {name: i for i, name in enumerate(names)}
    children = {}
    refs = {}
    for name, rhs in sys.equations:
        i = index[name]
        children[i] = frozenset(index[r] for r in rhs if r in index)
        refs[i] = frozenset(sys.atoms[r] for r in rhs if r not in index)
    if not names:
        return {}
    solution = u.canonicalize_all(children, refs)
    return {name: solution[index[name]] for name in names}
