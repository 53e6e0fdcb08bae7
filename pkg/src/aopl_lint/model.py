"""Abstract syntax for authorization and obligation policies.

A policy talks about one agent's elementary actions.  Rule heads are deontic
literals over those actions (permitted or obligated, possibly negated); rule
conditions are literals over statics, fluents, and sort membership atoms.
Deontic atoms never appear in conditions, which keeps every rule body a pure
test against the state.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

from .diagnostics import Diagnostic, Severity, sort_diagnostics

# Names claimed by the logic-program translation and the concrete syntax.
# Letting a sort, predicate, or rule label shadow one of these would make
# emitted programs and canonical holds-atoms ambiguous.
RESERVED_NAMES = frozenset(
    {
        "ab",
        "action",
        "b",
        "body",
        "constraint",
        "fluent",
        "head",
        "holds",
        "if",
        "impossible",
        "impossible_exec",
        "mbr",
        "neg",
        "normally",
        "not",
        "obl",
        "opp",
        "permitted",
        "prefer",
        "rule",
        "sorts",
        "static",
        "text",
        "type",
        "where",
    }
)


class PredicateKind(Enum):
    STATIC = "static"
    FLUENT = "fluent"
    ACTION = "action"


class RuleKind(Enum):
    STRICT = "strict"
    DEFEASIBLE = "defeasible"
    PREFERENCE = "prefer"


class Modality(Enum):
    PERMITTED = "permitted"
    OBL = "obl"


def is_variable(name: str) -> bool:
    """Identifiers starting with an upper-case letter are variables."""
    return bool(name) and name[0].isupper()


@dataclass(frozen=True)
class Atom:
    """A predicate applied to constant or variable arguments."""

    predicate: str
    args: tuple[str, ...] = ()

    @property
    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def variables(self) -> tuple[str, ...]:
        """Variables in argument order, first occurrence only."""
        seen: list[str] = []
        for arg in self.args:
            if is_variable(arg) and arg not in seen:
                seen.append(arg)
        return tuple(seen)

    def substitute(self, binding: Mapping[str, str]) -> "Atom":
        return Atom(self.predicate, tuple(binding.get(a, a) for a in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(self.args)})"


@dataclass(frozen=True)
class Literal:
    """An atom or its classical negation, written !atom in source text."""

    atom: Atom
    positive: bool = True

    def negated(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def substitute(self, binding: Mapping[str, str]) -> "Literal":
        return Literal(self.atom.substitute(binding), self.positive)

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"!{self.atom}"


@dataclass(frozen=True)
class Happening:
    """An action execution or non-execution: e or -e."""

    action: Atom
    positive: bool = True

    def negated(self) -> "Happening":
        return Happening(self.action, not self.positive)

    def substitute(self, binding: Mapping[str, str]) -> "Happening":
        return Happening(self.action.substitute(binding), self.positive)

    def __str__(self) -> str:
        return str(self.action) if self.positive else f"-{self.action}"


@dataclass(frozen=True)
class HeadLiteral:
    """A deontic literal: [!] permitted(e) or [!] obl(h).

    Only obligations may talk about non-execution, so a permitted head
    always carries a positive happening.
    """

    modality: Modality
    happening: Happening
    positive: bool = True

    def opposite(self) -> "HeadLiteral":
        """The complementary deontic literal (classical negation flipped)."""
        return replace(self, positive=not self.positive)

    def substitute(self, binding: Mapping[str, str]) -> "HeadLiteral":
        return replace(self, happening=self.happening.substitute(binding))

    def __str__(self) -> str:
        sign = "" if self.positive else "!"
        return f"{sign}{self.modality.value}({self.happening})"


@dataclass(frozen=True)
class PolicyRule:
    """One policy statement.

    Strict and defeasible rules carry a head and a condition.  Preference
    statements carry the labels of two defeasible rules instead and never
    have a condition of their own.  ``text`` holds the natural-language
    statement the rule formalizes, used verbatim in explanations.
    ``where`` pins variable sorts that cannot be inferred from predicate
    positions.
    """

    label: str
    kind: RuleKind
    head: HeadLiteral | None = None
    condition: tuple[Literal, ...] = ()
    preferred: str | None = None
    dispreferred: str | None = None
    text: str | None = None
    where: tuple[tuple[str, str], ...] = ()

    def variables(self) -> tuple[str, ...]:
        """Variables in first-occurrence order over head then condition."""
        seen: list[str] = []
        atoms: list[Atom] = []
        if self.head is not None:
            atoms.append(self.head.happening.action)
        atoms.extend(lit.atom for lit in self.condition)
        for atom in atoms:
            for var in atom.variables():
                if var not in seen:
                    seen.append(var)
        return tuple(seen)


@dataclass(frozen=True)
class Policy:
    rules: tuple[PolicyRule, ...] = ()

    def rule_map(self) -> dict[str, PolicyRule]:
        return {r.label: r for r in self.rules}

    def rules_of_kind(self, kind: RuleKind) -> tuple[PolicyRule, ...]:
        return tuple(r for r in self.rules if r.kind is kind)


@dataclass(frozen=True)
class SortDecl:
    name: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    kind: PredicateKind
    arg_sorts: tuple[str, ...] = ()


@dataclass(frozen=True)
class StateConstraint:
    """A state law: head holds whenever the body does.

    A constraint without a head forbids the body combination outright.
    """

    body: tuple[Literal, ...]
    head: Literal | None = None


@dataclass(frozen=True)
class ExecConstraint:
    """Marks an action non-executable in states satisfying the condition."""

    action: Atom
    condition: tuple[Literal, ...] = ()


@dataclass(frozen=True)
class DomainSpec:
    sorts: tuple[SortDecl, ...] = ()
    predicates: tuple[PredicateDecl, ...] = ()
    state_constraints: tuple[StateConstraint, ...] = ()
    exec_constraints: tuple[ExecConstraint, ...] = ()

    def sort_map(self) -> dict[str, SortDecl]:
        return {s.name: s for s in self.sorts}

    def predicate_map(self) -> dict[str, PredicateDecl]:
        return {p.name: p for p in self.predicates}

    def predicates_of_kind(self, kind: PredicateKind) -> tuple[PredicateDecl, ...]:
        return tuple(p for p in self.predicates if p.kind is kind)

    def merge(self, other: "DomainSpec") -> "DomainSpec":
        return DomainSpec(
            sorts=self.sorts + other.sorts,
            predicates=self.predicates + other.predicates,
            state_constraints=self.state_constraints + other.state_constraints,
            exec_constraints=self.exec_constraints + other.exec_constraints,
        )


def _positional_sorts(atom: Atom, domain: DomainSpec) -> tuple[str, ...] | None:
    """Expected argument sorts for an atom, or None if undeclared.

    Sort names double as unary membership predicates.
    """
    decl = domain.predicate_map().get(atom.predicate)
    if decl is not None:
        return decl.arg_sorts
    if atom.predicate in domain.sort_map():
        return (atom.predicate,)
    return None


class _Scope:
    """Tracks variable sorts within one rule or constraint."""

    def __init__(self, domain: DomainSpec) -> None:
        self.domain = domain
        self.sorts: dict[str, str] = {}
        self.problems: list[str] = []

    def bind(self, var: str, sort: str) -> None:
        known = self.sorts.get(var)
        if known is None:
            self.sorts[var] = sort
        elif known != sort:
            self.problems.append(
                f"variable {var} has conflicting sorts {known} and {sort}"
            )

    def check_atom(self, atom: Atom) -> None:
        expected = _positional_sorts(atom, self.domain)
        if expected is None:
            self.problems.append(f"undeclared predicate: {atom.predicate}")
            return
        if len(expected) != len(atom.args):
            self.problems.append(
                f"{atom.predicate} expects {len(expected)} argument(s), got {len(atom.args)}"
            )
            return
        sort_map = self.domain.sort_map()
        for arg, sort in zip(atom.args, expected):
            if sort not in sort_map:
                # The predicate declaration itself is reported elsewhere.
                continue
            if is_variable(arg):
                self.bind(arg, sort)
            elif arg not in sort_map[sort].members:
                self.problems.append(f"constant {arg} is not in sort {sort}")


def _condition_kind_ok(lit: Literal, domain: DomainSpec) -> bool:
    """Condition literals range over statics, fluents, and sort atoms only."""
    decl = domain.predicate_map().get(lit.atom.predicate)
    if decl is not None:
        return decl.kind is not PredicateKind.ACTION
    return lit.atom.predicate in domain.sort_map()


def validate(policy: Policy, domain: DomainSpec) -> list[Diagnostic]:
    """Semantic checks over a parsed or hand-built policy and domain.

    Returns diagnostics sorted by (rule label, message); an empty list means
    the pair is well-formed and safe to ground.
    """
    out: list[Diagnostic] = []

    def err(message: str, label: str | None = None) -> None:
        out.append(Diagnostic(Severity.ERROR, message, rule_label=label))

    def warn(message: str, label: str | None = None) -> None:
        out.append(Diagnostic(Severity.WARNING, message, rule_label=label))

    sort_map = domain.sort_map()
    pred_map = domain.predicate_map()

    seen_sorts: set[str] = set()
    for sort in domain.sorts:
        if sort.name in seen_sorts:
            err(f"duplicate sort name: {sort.name}")
        seen_sorts.add(sort.name)
        if sort.name in RESERVED_NAMES:
            err(f"reserved name used as sort: {sort.name}")
        if not sort.members:
            err(f"sort {sort.name} has no members")
        seen_members: set[str] = set()
        for member in sort.members:
            if member in seen_members:
                err(f"duplicate constant {member} in sort {sort.name}")
            seen_members.add(member)

    seen_preds: set[str] = set()
    for pred in domain.predicates:
        if pred.name in seen_preds:
            err(f"duplicate predicate name: {pred.name}")
        seen_preds.add(pred.name)
        if pred.name in RESERVED_NAMES:
            err(f"reserved name used as predicate: {pred.name}")
        if pred.name in sort_map:
            err(f"predicate name collides with sort: {pred.name}")
        for sort in pred.arg_sorts:
            if sort not in sort_map:
                err(f"predicate {pred.name} uses undeclared sort {sort}")

    def check_scope(scope: _Scope, label: str | None) -> None:
        for problem in scope.problems:
            err(problem, label)

    for constraint in domain.state_constraints:
        scope = _Scope(domain)
        for lit in list(constraint.body) + ([constraint.head] if constraint.head else []):
            scope.check_atom(lit.atom)
            if _positional_sorts(lit.atom, domain) is not None and not _condition_kind_ok(
                lit, domain
            ):
                scope.problems.append(
                    f"state constraint literal {lit} must be a static, fluent, or sort atom"
                )
        check_scope(scope, None)

    for constraint in domain.exec_constraints:
        scope = _Scope(domain)
        scope.check_atom(constraint.action)
        decl = pred_map.get(constraint.action.predicate)
        if decl is not None and decl.kind is not PredicateKind.ACTION:
            scope.problems.append(
                f"executability constraint target {constraint.action.predicate} is not an action"
            )
        for lit in constraint.condition:
            scope.check_atom(lit.atom)
            if _positional_sorts(lit.atom, domain) is not None and not _condition_kind_ok(
                lit, domain
            ):
                scope.problems.append(
                    f"executability condition literal {lit} must be a static, fluent, or sort atom"
                )
        check_scope(scope, None)

    rule_map: dict[str, PolicyRule] = {}
    seen_labels: set[str] = set()
    for rule in policy.rules:
        if rule.label in seen_labels:
            err(f"duplicate rule label: {rule.label}", rule.label)
        else:
            rule_map[rule.label] = rule
        seen_labels.add(rule.label)
        if rule.label in RESERVED_NAMES:
            err(f"reserved name used as rule label: {rule.label}", rule.label)
        if rule.label in pred_map or rule.label in sort_map:
            err(
                f"rule label {rule.label} collides with a declared predicate or sort",
                rule.label,
            )

    for rule in policy.rules:
        label = rule.label
        if rule.kind is RuleKind.PREFERENCE:
            if rule.head is not None or rule.condition:
                err("preference statements take no head or condition", label)
            if not rule.preferred or not rule.dispreferred:
                err("preference must name two rule labels", label)
                continue
            if rule.preferred == rule.dispreferred:
                err(f"preference targets must be distinct: {rule.preferred}", label)
            targets: list[PolicyRule] = []
            for target in (rule.preferred, rule.dispreferred):
                target_rule = rule_map.get(target)
                if target_rule is None:
                    err(f"preference target not found: {target}", label)
                elif target_rule.kind is not RuleKind.DEFEASIBLE:
                    err(f"preference target not defeasible: {target}", label)
                else:
                    targets.append(target_rule)
            # Same-named variables across the two targets ground together,
            # so their sorts must agree.
            if len(targets) == 2:
                first = rule_variable_sorts(targets[0], policy, domain)
                second = rule_variable_sorts(targets[1], policy, domain)
                for var in sorted(set(first) & set(second)):
                    if first[var] != second[var]:
                        err(
                            f"preference targets disagree on sort of shared variable {var}",
                            label,
                        )
            continue

        if rule.head is None:
            err("rule requires a head", label)
            continue
        if rule.preferred or rule.dispreferred:
            err("only preference statements name other rules", label)

        scope = _Scope(domain)
        head = rule.head
        if head.modality is Modality.PERMITTED and not head.happening.positive:
            err("permitted heads cannot negate the action", label)
        action_decl = pred_map.get(head.happening.action.predicate)
        if action_decl is None or action_decl.kind is not PredicateKind.ACTION:
            err(
                f"head action {head.happening.action.predicate} is not a declared action",
                label,
            )
        else:
            scope.check_atom(head.happening.action)

        for lit in rule.condition:
            scope.check_atom(lit.atom)
            if _positional_sorts(lit.atom, domain) is not None and not _condition_kind_ok(
                lit, domain
            ):
                scope.problems.append(
                    f"condition literal {lit} must be a static, fluent, or sort atom"
                )

        for var, sort in rule.where:
            if sort not in sort_map:
                scope.problems.append(f"where-clause names undeclared sort {sort}")
                continue
            inferred = scope.sorts.get(var)
            if inferred is not None and inferred != sort:
                scope.problems.append(
                    f"where-clause sort {sort} for {var} conflicts with inferred sort {inferred}"
                )
            else:
                scope.sorts[var] = sort

        for var in rule.variables():
            if var not in scope.sorts:
                scope.problems.append(f"variable {var} has no inferable sort")
        check_scope(scope, label)

    # Mutual preferences disable both targets.  That is well-defined but
    # almost always a policy bug, so flag it without rejecting.
    pref_pairs = {
        (r.preferred, r.dispreferred)
        for r in policy.rules
        if r.kind is RuleKind.PREFERENCE and r.preferred and r.dispreferred
    }
    for a, b in sorted(pref_pairs):
        if a is not None and b is not None and a < b and (b, a) in pref_pairs:
            warn(f"mutual preference between {a} and {b} disables both rules")

    return sort_diagnostics(out)


def rule_variable_sorts(
    rule: PolicyRule, policy: Policy, domain: DomainSpec
) -> dict[str, str]:
    """Resolved sort of every variable in a validated rule."""
    scope = _Scope(domain)
    if rule.head is not None:
        scope.check_atom(rule.head.happening.action)
    for lit in rule.condition:
        scope.check_atom(lit.atom)
    for var, sort in rule.where:
        scope.sorts.setdefault(var, sort)
    return dict(scope.sorts)


def iter_condition_atoms(rules: Iterable[PolicyRule]) -> Iterable[Atom]:
    for rule in rules:
        for lit in rule.condition:
            yield lit.atom
