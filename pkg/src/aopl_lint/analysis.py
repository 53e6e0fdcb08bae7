"""Issue detectors, compliance classification, and the state-space sweep.

Detectors work per state and answer questions an author can act on: which
pairs of statements contradict each other here, which action has no
applicable authorization and why, where do defeasible rules pull in both
directions, and which obligations collide with authorizations.  Every record
names the ground rules involved and the condition literals that made them
fire or fail, so reports can quote the original statements.

The sweep runs the detectors across a whole state space, deduplicates the
ground findings, and collapses instances that differ only in constants into
one family per schematic cause.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable

from .engine import (
    AmbiguityStats,
    AnswerSet,
    WorldState,
    ambiguity_stats,
    answer_sets,
    entails,
)
from .grounding import GroundRule
from .model import Atom, Happening, HeadLiteral, Literal, Modality, RuleKind
from .reify import ReifiedBase
from .states import (
    DEFAULT_MAX_STATES,
    check_pins,
    enumerate_states,
    executable_actions,
    state_space_size,
)


class IssueKind(Enum):
    INCONSISTENCY = "inconsistency"
    OBLIGATION_CONFLICT = "obligation_conflict"
    MODALITY_CONFLICT = "modality_conflict"
    AMBIGUITY = "ambiguity"
    UNDERSPECIFIED = "underspecified"


# Display order: contradictions first, coverage gaps last.
KIND_ORDER = {
    IssueKind.INCONSISTENCY: 0,
    IssueKind.OBLIGATION_CONFLICT: 1,
    IssueKind.MODALITY_CONFLICT: 2,
    IssueKind.AMBIGUITY: 3,
    IssueKind.UNDERSPECIFIED: 4,
}


@dataclass(frozen=True)
class IssueRecord:
    """One finding in one state.

    ``rule_labels`` are ground labels, first the rule supporting the
    positive or obligating side, then its opponent when there is one.
    ``pos_support`` and ``neg_support`` list the body literals that hold and
    make each side fire.  ``missing`` maps inapplicable rules to the body
    literals that fail, for coverage gaps.  ``pairs`` carries the opposing
    rule pairs behind an ambiguity.  ``urgency`` ranks modality conflicts,
    1 being the most pressing.
    """

    kind: IssueKind
    action: Happening
    witness_state: WorldState
    rule_labels: tuple[str, ...] = ()
    rule_texts: tuple[str, ...] = ()
    pos_support: tuple[Literal, ...] = ()
    neg_support: tuple[Literal, ...] = ()
    missing: tuple[tuple[str, tuple[Literal, ...]], ...] = ()
    pairs: tuple[tuple[str, str], ...] = ()
    urgency: int | None = None
    stats: AmbiguityStats | None = None
    case: int | None = None

    def key(self) -> tuple:
        """Identity of the finding independent of the witness state."""
        return (
            self.kind.value,
            str(self.action),
            self.rule_labels,
            tuple(str(l) for l in self.pos_support),
            tuple(str(l) for l in self.neg_support),
            tuple((r, tuple(str(l) for l in lits)) for r, lits in self.missing),
            self.pairs,
            self.urgency if self.urgency is not None else 0,
            self.case if self.case is not None else 0,
            (self.stats.n, self.stats.n_p, self.stats.n_np) if self.stats else (),
        )


def _texts(base: ReifiedBase, labels: Iterable[str]) -> tuple[str, ...]:
    return tuple(base.text_or_print(label) for label in labels)


def _models(base: ReifiedBase, state: WorldState, models: list[AnswerSet] | None):
    return answer_sets(base, state) if models is None else models


def _fired_with_head(
    base: ReifiedBase, model: AnswerSet, head: HeadLiteral
) -> list[str]:
    return [
        label
        for label in base.rules
        if label in model.fired_rules and base.heads.get(label) == head
    ]


def _complementary_pairs(heads: Iterable[HeadLiteral]) -> list[HeadLiteral]:
    """The positive member of every complementary pair, in a fixed order."""
    return sorted({h if h.positive else h.opposite() for h in heads}, key=str)


def detect_inconsistency(
    base: ReifiedBase,
    state: WorldState,
    models: list[AnswerSet] | None = None,
) -> list[IssueRecord]:
    """Rule pairs deriving a deontic literal and its negation together.

    One record per (action, firing rule pair) found in some answer set; the
    supports are the body literals of each side, all of which hold in the
    witness state.
    """
    models = _models(base, state, models)
    records: dict[tuple, IssueRecord] = {}
    for model in models:
        for positive in _complementary_pairs(base.ground.head_universe):
            negative = positive.opposite()
            if positive not in model.heads or negative not in model.heads:
                continue
            for r1 in _fired_with_head(base, model, positive):
                for r2 in _fired_with_head(base, model, negative):
                    record = IssueRecord(
                        kind=IssueKind.INCONSISTENCY,
                        action=positive.happening,
                        witness_state=state,
                        rule_labels=(r1, r2),
                        rule_texts=_texts(base, (r1, r2)),
                        pos_support=base.bodies[r1],
                        neg_support=base.bodies[r2],
                    )
                    records.setdefault(record.key(), record)
    return [records[key] for key in sorted(records)]


def _authorization_rules(base: ReifiedBase, action: Atom) -> list[GroundRule]:
    return [
        rule
        for rule in base.ground.rules
        if rule.head is not None
        and rule.head.modality is Modality.PERMITTED
        and rule.head.happening.action == action
    ]


def detect_underspecification(
    base: ReifiedBase,
    state: WorldState,
    action: Atom,
    models: list[AnswerSet] | None = None,
) -> IssueRecord | None:
    """Authorization coverage gap for one action in one state.

    Case 1: the policy has no authorization rules about the action at all.
    Case 2: rules exist, but some answer set settles the action neither way;
    the record lists, per rule, the body literals that fail in this state.
    """
    auth_rules = _authorization_rules(base, action)
    happening = Happening(action, True)
    if not auth_rules:
        return IssueRecord(
            kind=IssueKind.UNDERSPECIFIED,
            action=happening,
            witness_state=state,
            case=1,
        )

    models = _models(base, state, models)
    permitted = HeadLiteral(Modality.PERMITTED, happening, True)
    negated = permitted.opposite()
    undecided = any(
        permitted not in m.heads and negated not in m.heads for m in models
    )
    if not undecided:
        return None

    missing: list[tuple[str, tuple[Literal, ...]]] = []
    for rule in auth_rules:
        failing = tuple(lit for lit in rule.condition if not _holds(base, state, lit))
        if failing:
            missing.append((rule.label, failing))
    labels = tuple(label for label, _ in missing)
    return IssueRecord(
        kind=IssueKind.UNDERSPECIFIED,
        action=happening,
        witness_state=state,
        rule_labels=labels,
        rule_texts=_texts(base, labels),
        missing=tuple(missing),
        case=2,
    )


def _holds(base: ReifiedBase, state: WorldState, literal: Literal) -> bool:
    if literal.atom in set(base.ground.sort_facts):
        return literal.positive
    return state.satisfies(literal)


def detect_ambiguity(
    base: ReifiedBase,
    state: WorldState,
    action: Atom,
    models: list[AnswerSet] | None = None,
) -> tuple[IssueRecord | None, AmbiguityStats]:
    """Defeasible disagreement about an action's permission in one state.

    Ambiguous when neither permitted(e) nor its negation holds in every
    answer set, yet every answer set decides one way or the other: the
    model count splits as n = n_p + n_np with both sides present.  The
    record pairs each applicable permitting rule with each applicable
    forbidding one.
    """
    models = _models(base, state, models)
    permitted = HeadLiteral(Modality.PERMITTED, Happening(action, True), True)
    stats = ambiguity_stats(models, permitted)
    ambiguous = (
        stats.n != stats.n_p
        and stats.n != stats.n_np
        and stats.n == stats.n_p + stats.n_np
    )
    if not ambiguous:
        return None, stats

    ab_rules = models[0].ab_rules
    def applicable_defeasible(head: HeadLiteral) -> list[str]:
        return [
            rule.label
            for rule in base.ground.rules
            if rule.kind is RuleKind.DEFEASIBLE
            and rule.head == head
            and rule.label not in ab_rules
            and all(_holds(base, state, lit) for lit in rule.condition)
        ]

    permitting = applicable_defeasible(permitted)
    forbidding = applicable_defeasible(permitted.opposite())
    pairs = tuple((p, f) for p in permitting for f in forbidding)
    labels = tuple(dict.fromkeys(permitting + forbidding))
    record = IssueRecord(
        kind=IssueKind.AMBIGUITY,
        action=Happening(action, True),
        witness_state=state,
        rule_labels=labels,
        rule_texts=_texts(base, labels),
        pairs=pairs,
        stats=stats,
    )
    return record, stats


def detect_obligation_conflict(
    base: ReifiedBase,
    state: WorldState,
    action: Atom,
    models: list[AnswerSet] | None = None,
) -> list[IssueRecord]:
    """Obligations to both do and not do the same action in one state.

    Fires when obl(e) and obl(-e) are each cautiously entailed; the records
    pair the rules that derive them within a single answer set.
    """
    models = _models(base, state, models)
    obl_do = HeadLiteral(Modality.OBL, Happening(action, True), True)
    obl_not = HeadLiteral(Modality.OBL, Happening(action, False), True)
    if not (
        entails(base, state, obl_do, models=models)
        and entails(base, state, obl_not, models=models)
    ):
        return []
    records: dict[tuple, IssueRecord] = {}
    for model in models:
        for r1 in _fired_with_head(base, model, obl_do):
            for r2 in _fired_with_head(base, model, obl_not):
                record = IssueRecord(
                    kind=IssueKind.OBLIGATION_CONFLICT,
                    action=Happening(action, True),
                    witness_state=state,
                    rule_labels=(r1, r2),
                    rule_texts=_texts(base, (r1, r2)),
                    pos_support=base.bodies[r1],
                    neg_support=base.bodies[r2],
                )
                records.setdefault(record.key(), record)
    return [records[key] for key in sorted(records)]


def detect_modality_conflicts(
    base: ReifiedBase,
    state: WorldState,
    models: list[AnswerSet] | None = None,
) -> list[IssueRecord]:
    """Obligations colliding with authorizations, ranked by urgency.

    Urgency 1: obligated to do an action some rule forbids.  Urgency 2:
    obligated to refrain from an action some rule permits.  Urgency 3:
    obligated to do an action whose permission the answer set leaves open.
    Each record cites the obligating rule and, for 1 and 2, its opponent.
    """
    models = _models(base, state, models)
    records: dict[tuple, IssueRecord] = {}

    def add(urgency: int, action: Atom, r1: str, r2: str | None) -> None:
        labels = (r1,) if r2 is None else (r1, r2)
        record = IssueRecord(
            kind=IssueKind.MODALITY_CONFLICT,
            action=Happening(action, True),
            witness_state=state,
            rule_labels=labels,
            rule_texts=_texts(base, labels),
            pos_support=base.bodies[r1],
            neg_support=base.bodies[r2] if r2 is not None else (),
            urgency=urgency,
        )
        records.setdefault(record.key(), record)

    for model in models:
        for action in base.ground.action_atoms:
            does = Happening(action, True)
            permitted = HeadLiteral(Modality.PERMITTED, does, True)
            forbidden = permitted.opposite()
            obl_do = HeadLiteral(Modality.OBL, does, True)
            obl_not = HeadLiteral(Modality.OBL, does.negated(), True)

            if obl_do in model.heads:
                for r1 in _fired_with_head(base, model, obl_do):
                    if forbidden in model.heads:
                        for r2 in _fired_with_head(base, model, forbidden):
                            add(1, action, r1, r2)
                    if permitted not in model.heads and forbidden not in model.heads:
                        add(3, action, r1, None)
            if obl_not in model.heads and permitted in model.heads:
                for r1 in _fired_with_head(base, model, obl_not):
                    for r2 in _fired_with_head(base, model, permitted):
                        add(2, action, r1, r2)

    return [records[key] for key in sorted(records)]


class AuthorizationClass(Enum):
    STRONGLY_COMPLIANT = "strongly compliant"
    NON_COMPLIANT = "non compliant"
    UNDERSPECIFIED = "underspecified"
    AMBIGUOUS = "ambiguous"
    CONFLICTED = "conflicted"


@dataclass(frozen=True)
class Compliance:
    """Authorization and obligation verdicts for one event in one state.

    ``action_classes`` classifies each action of the event on its own.  The
    event-level booleans follow the usual ladder: strongly compliant events
    are weakly compliant; non-compliance is the failure of weak compliance.
    ``obligation_compliant`` checks the event against every cautious
    obligation, including obligations about actions outside the event.
    """

    action_classes: tuple[tuple[Atom, AuthorizationClass], ...]
    strongly_compliant: bool
    weakly_compliant: bool
    non_compliant: bool
    obligation_compliant: bool


def classify_action(
    base: ReifiedBase,
    state: WorldState,
    action: Atom,
    models: list[AnswerSet] | None = None,
) -> AuthorizationClass:
    models = _models(base, state, models)
    permitted = HeadLiteral(Modality.PERMITTED, Happening(action, True), True)
    negated = permitted.opposite()
    strongly = entails(base, state, permitted, models=models)
    forbidden = entails(base, state, negated, models=models)
    if strongly and forbidden:
        return AuthorizationClass.CONFLICTED
    if strongly:
        return AuthorizationClass.STRONGLY_COMPLIANT
    if forbidden:
        return AuthorizationClass.NON_COMPLIANT
    if any(permitted not in m.heads and negated not in m.heads for m in models):
        return AuthorizationClass.UNDERSPECIFIED
    return AuthorizationClass.AMBIGUOUS


def classify_compliance(
    base: ReifiedBase,
    state: WorldState,
    event: tuple[Atom, ...],
    models: list[AnswerSet] | None = None,
) -> Compliance:
    """Classify an event against the policy in one state."""
    models = _models(base, state, models)
    classes = tuple((action, classify_action(base, state, action, models)) for action in event)

    strongly = True
    weakly = True
    for action in event:
        permitted = HeadLiteral(Modality.PERMITTED, Happening(action, True), True)
        if not entails(base, state, permitted, models=models):
            strongly = False
        if entails(base, state, permitted.opposite(), models=models):
            weakly = False

    obligation_ok = True
    performed = set(event)
    for action in base.ground.action_atoms:
        obl_do = HeadLiteral(Modality.OBL, Happening(action, True), True)
        obl_not = HeadLiteral(Modality.OBL, Happening(action, False), True)
        if entails(base, state, obl_do, models=models) and action not in performed:
            obligation_ok = False
        if entails(base, state, obl_not, models=models) and action in performed:
            obligation_ok = False

    return Compliance(
        action_classes=classes,
        strongly_compliant=strongly,
        weakly_compliant=weakly,
        non_compliant=not weakly,
        obligation_compliant=obligation_ok,
    )


@dataclass(frozen=True)
class SweepOptions:
    pins: tuple[Literal, ...] = ()
    max_states: int = DEFAULT_MAX_STATES


class SweepLimitError(Exception):
    """Raised when the state space exceeds the configured ceiling."""


@dataclass(frozen=True)
class InstanceRecord:
    """A deduplicated ground finding with the states it was seen in.

    The representative record keeps the witness state with the fewest true
    atoms, breaking ties by enumeration order.
    """

    record: IssueRecord
    states: frozenset[WorldState]

    @property
    def state_count(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class SweepResult:
    instances: tuple[InstanceRecord, ...]
    states_examined: int


def _witness_rank(state: WorldState) -> tuple[int, str]:
    return (state.positive_count(), str(state))


def sweep(base: ReifiedBase, options: SweepOptions = SweepOptions()) -> SweepResult:
    """Run every detector over the (pinned) state space and deduplicate.

    Sweeping a partition of the state space and merging the results equals
    sweeping the whole space, so callers may split the work freely.
    """
    pin_problems = check_pins(base.ground, options.pins)
    if pin_problems:
        raise ValueError(str(pin_problems[0]))
    size = state_space_size(base.ground, options.pins)
    if size > options.max_states:
        raise SweepLimitError(
            f"state space holds {size} assignments, above the limit of "
            f"{options.max_states}; pin atoms or raise the limit"
        )

    accum: dict[tuple, tuple[IssueRecord, set[WorldState]]] = {}
    states_examined = 0
    for state in enumerate_states(base.ground, options.pins):
        states_examined += 1
        models = answer_sets(base, state)
        executable = set(executable_actions(base.ground, state))

        found: list[IssueRecord] = []
        found.extend(
            r
            for r in detect_inconsistency(base, state, models=models)
            if r.action.action in executable
        )
        for action in base.ground.action_atoms:
            if action not in executable:
                continue
            gap = detect_underspecification(base, state, action, models=models)
            if gap is not None:
                found.append(gap)
            ambiguity, _ = detect_ambiguity(base, state, action, models=models)
            if ambiguity is not None:
                found.append(ambiguity)
            found.extend(detect_obligation_conflict(base, state, action, models=models))
        found.extend(
            r
            for r in detect_modality_conflicts(base, state, models=models)
            if r.action.action in executable
        )

        for record in found:
            key = record.key()
            entry = accum.get(key)
            if entry is None:
                accum[key] = (record, {state})
            else:
                best, seen = entry
                seen.add(state)
                if _witness_rank(state) < _witness_rank(best.witness_state):
                    accum[key] = (replace(best, witness_state=state), seen)

    instances = tuple(
        InstanceRecord(record=rec, states=frozenset(seen))
        for key, (rec, seen) in sorted(accum.items())
    )
    return SweepResult(instances=instances, states_examined=states_examined)


def merge_sweeps(first: SweepResult, second: SweepResult) -> SweepResult:
    """Combine sweeps of disjoint state-space slices."""
    accum: dict[tuple, tuple[IssueRecord, set[WorldState]]] = {}
    for result in (first, second):
        for instance in result.instances:
            key = instance.record.key()
            entry = accum.get(key)
            if entry is None:
                accum[key] = (instance.record, set(instance.states))
            else:
                best, seen = entry
                seen.update(instance.states)
                if _witness_rank(instance.record.witness_state) < _witness_rank(
                    best.witness_state
                ):
                    accum[key] = (instance.record, seen)
    instances = tuple(
        InstanceRecord(record=rec, states=frozenset(seen))
        for key, (rec, seen) in sorted(accum.items())
    )
    return SweepResult(
        instances=instances,
        states_examined=first.states_examined + second.states_examined,
    )


def _strip_binding(label: str) -> str:
    return label.split("[", 1)[0]


def _literal_family(literal: Literal) -> str:
    sign = "" if literal.positive else "!"
    return f"{sign}{literal.atom.predicate}"


@dataclass(frozen=True)
class FamilyRecord:
    """Instances of one finding that differ only in their constants.

    Display strings come from the representative instance, the one with the
    smallest witness state.  ``state_count`` counts distinct states across
    all instances; ``instance_count`` counts the ground instances.
    """

    kind: IssueKind
    action: str
    base_labels: tuple[str, ...]
    instance_labels: tuple[str, ...]
    rule_texts: tuple[str, ...]
    pos_support: tuple[str, ...]
    neg_support: tuple[str, ...]
    missing: tuple[tuple[str, tuple[str, ...]], ...]
    pairs: tuple[tuple[str, str], ...]
    urgency: int | None
    stats: tuple[int, int, int] | None
    case: int | None
    witness_true_atoms: tuple[str, ...]
    state_count: int
    instance_count: int


def _family_key(record: IssueRecord) -> tuple:
    action_sign = "" if record.action.positive else "-"
    return (
        record.kind.value,
        f"{action_sign}{record.action.action.predicate}",
        tuple(_strip_binding(l) for l in record.rule_labels),
        tuple(_literal_family(l) for l in record.pos_support),
        tuple(_literal_family(l) for l in record.neg_support),
        tuple(
            (_strip_binding(r), tuple(_literal_family(l) for l in lits))
            for r, lits in record.missing
        ),
        tuple((_strip_binding(a), _strip_binding(b)) for a, b in record.pairs),
        record.urgency if record.urgency is not None else 0,
        record.case if record.case is not None else 0,
        (record.stats.n, record.stats.n_p, record.stats.n_np) if record.stats else (),
    )


def collapse_families(result: SweepResult) -> tuple[FamilyRecord, ...]:
    """Group instance records into families and pick representatives."""
    groups: dict[tuple, list[InstanceRecord]] = {}
    for instance in result.instances:
        groups.setdefault(_family_key(instance.record), []).append(instance)

    families: list[FamilyRecord] = []
    for key, members in groups.items():
        representative = min(
            members, key=lambda m: _witness_rank(m.record.witness_state)
        )
        record = representative.record
        all_states: set[WorldState] = set()
        for member in members:
            all_states.update(member.states)
        families.append(
            FamilyRecord(
                kind=record.kind,
                action=str(record.action),
                base_labels=tuple(_strip_binding(l) for l in record.rule_labels),
                instance_labels=record.rule_labels,
                rule_texts=record.rule_texts,
                pos_support=tuple(str(l) for l in record.pos_support),
                neg_support=tuple(str(l) for l in record.neg_support),
                missing=tuple(
                    (r, tuple(str(l) for l in lits)) for r, lits in record.missing
                ),
                pairs=record.pairs,
                urgency=record.urgency,
                stats=(record.stats.n, record.stats.n_p, record.stats.n_np)
                if record.stats
                else None,
                case=record.case,
                witness_true_atoms=tuple(
                    str(a)
                    for a in record.witness_state.universe
                    if a in record.witness_state.true_atoms
                ),
                state_count=len(all_states),
                instance_count=len(members),
            )
        )
    families.sort(
        key=lambda f: (
            KIND_ORDER[f.kind],
            f.urgency if f.urgency is not None else 0,
            f.action,
            f.base_labels,
            f.pos_support,
            f.neg_support,
            f.missing,
        )
    )
    return tuple(families)
