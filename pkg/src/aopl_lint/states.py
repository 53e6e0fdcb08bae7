"""State-space enumeration and event generation for a ground domain.

States are complete truth assignments over the ground static and fluent
atoms, filtered by the domain's state constraints.  Exhaustive enumeration is
exponential, so callers can pin atoms to carve out a slice and must size the
remainder with ``state_space_size`` before iterating blindly.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator

from .diagnostics import Diagnostic, Severity
from .engine import WorldState
from .grounding import GroundPolicy
from .model import Atom, Literal
from .parser import parse_ground_literal

DEFAULT_MAX_STATES = 1 << 20


def _satisfies(state: WorldState, literal: Literal, sort_facts: frozenset[Atom]) -> bool:
    if literal.atom in sort_facts:
        return literal.positive
    return state.satisfies(literal)


def satisfies_constraints(gp: GroundPolicy, state: WorldState) -> bool:
    """True when the state violates no state constraint."""
    sort_facts = frozenset(gp.sort_facts)
    for constraint in gp.state_constraints:
        body_holds = all(_satisfies(state, lit, sort_facts) for lit in constraint.body)
        if not body_holds:
            continue
        if constraint.head is None:
            return False
        if not _satisfies(state, constraint.head, sort_facts):
            return False
    return True


def check_pins(gp: GroundPolicy, pins: Iterable[Literal]) -> list[Diagnostic]:
    """Validate pin literals: known state atoms, no contradictions."""
    out: list[Diagnostic] = []
    state_atoms = set(gp.state_atoms)
    signs: dict[Atom, bool] = {}
    for pin in pins:
        if pin.atom not in state_atoms:
            out.append(
                Diagnostic(Severity.ERROR, f"pin atom {pin.atom} is not a state atom")
            )
            continue
        previous = signs.get(pin.atom)
        if previous is not None and previous != pin.positive:
            out.append(Diagnostic(Severity.ERROR, f"contradictory pins for {pin.atom}"))
        signs[pin.atom] = pin.positive
    return out


def state_space_size(gp: GroundPolicy, pins: Iterable[Literal] = ()) -> int:
    """Number of assignments enumeration will visit (before constraints)."""
    pinned = {pin.atom for pin in pins}
    unpinned = [a for a in gp.state_atoms if a not in pinned]
    return 1 << len(unpinned)


def enumerate_states(
    gp: GroundPolicy, pins: Iterable[Literal] = ()
) -> Iterator[WorldState]:
    """All constraint-satisfying states, respecting pinned literals.

    Deterministic order: the all-false assignment of unpinned atoms first,
    then counting up with the last declared atom varying fastest.
    Contradictory or unknown pins yield an empty stream; call check_pins to
    get the diagnostics.
    """
    pins = list(pins)
    if check_pins(gp, pins):
        return
    signs = {pin.atom: pin.positive for pin in pins}
    unpinned = [a for a in gp.state_atoms if a not in signs]
    pinned_true = frozenset(a for a, positive in signs.items() if positive)
    for values in product((False, True), repeat=len(unpinned)):
        true_atoms = pinned_true | {a for a, v in zip(unpinned, values) if v}
        state = WorldState(gp.state_atoms, frozenset(true_atoms))
        if satisfies_constraints(gp, state):
            yield state


def executable_actions(gp: GroundPolicy, state: WorldState) -> tuple[Atom, ...]:
    """Ground actions not ruled out by an executability constraint."""
    sort_facts = frozenset(gp.sort_facts)
    blocked: set[Atom] = set()
    for constraint in gp.exec_constraints:
        if all(_satisfies(state, lit, sort_facts) for lit in constraint.condition):
            blocked.add(constraint.action)
    return tuple(a for a in gp.action_atoms if a not in blocked)


def enumerate_events(
    gp: GroundPolicy, state: WorldState, max_compound_size: int = 1
) -> Iterator[tuple[Atom, ...]]:
    """Candidate events: sets of executable actions up to the given size.

    The empty event (doing nothing) comes first; it matters for obligation
    checks even though no authorization applies to it.
    """
    actions = executable_actions(gp, state)
    for size in range(0, max_compound_size + 1):
        yield from combinations(actions, size)


def parse_pins(texts: Iterable[str]) -> list[Literal]:
    """Parse pin arguments of the form ``atom`` or ``!atom``."""
    return [parse_ground_literal(text) for text in texts]


def load_state(gp: GroundPolicy, text: str) -> tuple[WorldState | None, list[Diagnostic]]:
    """Read a state file: one ground literal per line, closed world.

    Atoms not listed are false.  Negative literals are allowed for
    documentation and checked for consistency with the positives.
    """
    out: list[Diagnostic] = []
    state_atoms = set(gp.state_atoms)
    positives: set[Atom] = set()
    explicit_negatives: set[Atom] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        try:
            literal = parse_ground_literal(line)
        except ValueError as exc:
            out.append(Diagnostic(Severity.ERROR, f"line {number}: {exc}"))
            continue
        if literal.atom not in state_atoms:
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    f"line {number}: {literal.atom} is not a state atom",
                )
            )
            continue
        if literal.positive:
            positives.add(literal.atom)
        else:
            explicit_negatives.add(literal.atom)

    for atom in sorted(positives & explicit_negatives, key=str):
        out.append(Diagnostic(Severity.ERROR, f"state lists {atom} as both true and false"))

    if any(d.severity is Severity.ERROR for d in out):
        return None, out

    state = WorldState(gp.state_atoms, frozenset(positives))
    if not satisfies_constraints(gp, state):
        out.append(Diagnostic(Severity.ERROR, "state violates a domain constraint"))
        return None, out
    return state, out
