"""Policy analysis toolkit for authorization and obligation policies.

Parse a policy and its domain, ground them, reify the result into a fact
base, evaluate states through a small answer-set engine, and report which
statements cause inconsistencies, coverage gaps, ambiguity, conflicting
obligations, or obligation/authorization collisions.
"""

from .analysis import (
    AuthorizationClass,
    Compliance,
    FamilyRecord,
    IssueKind,
    IssueRecord,
    SweepLimitError,
    SweepOptions,
    SweepResult,
    classify_action,
    classify_compliance,
    collapse_families,
    detect_ambiguity,
    detect_inconsistency,
    detect_modality_conflicts,
    detect_obligation_conflict,
    detect_underspecification,
    merge_sweeps,
    sweep,
)
from .diagnostics import Diagnostic, Position, Severity, SourceFile
from .emit import emit_asp
from .engine import (
    AmbiguityStats,
    AnswerSet,
    WorldState,
    ambiguity_stats,
    answer_sets,
    entails,
)
from .grounding import GroundPolicy, GroundRule, GroundingError, ground
from .model import (
    Atom,
    DomainSpec,
    ExecConstraint,
    Happening,
    HeadLiteral,
    Literal,
    Modality,
    Policy,
    PolicyRule,
    PredicateDecl,
    PredicateKind,
    RuleKind,
    SortDecl,
    StateConstraint,
    validate,
)
from .oracle import OracleSizeError, direct_program_models, oracle_answer_sets
from .parser import ParseResult, parse, parse_files, parse_ground_atom, parse_ground_literal
from .printer import print_domain, print_policy
from .reify import ReifiedBase, reify
from .report import AnalysisReport, build_report, parse_json, render, render_json, render_text
from .states import (
    enumerate_events,
    enumerate_states,
    executable_actions,
    load_state,
    satisfies_constraints,
    state_space_size,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityStats",
    "AnalysisReport",
    "AnswerSet",
    "Atom",
    "AuthorizationClass",
    "Compliance",
    "Diagnostic",
    "DomainSpec",
    "ExecConstraint",
    "FamilyRecord",
    "GroundPolicy",
    "GroundRule",
    "GroundingError",
    "Happening",
    "HeadLiteral",
    "IssueKind",
    "IssueRecord",
    "Literal",
    "Modality",
    "OracleSizeError",
    "ParseResult",
    "Policy",
    "PolicyRule",
    "Position",
    "PredicateDecl",
    "PredicateKind",
    "ReifiedBase",
    "RuleKind",
    "Severity",
    "SortDecl",
    "SourceFile",
    "StateConstraint",
    "SweepLimitError",
    "SweepOptions",
    "SweepResult",
    "WorldState",
    "ambiguity_stats",
    "answer_sets",
    "build_report",
    "classify_action",
    "classify_compliance",
    "collapse_families",
    "detect_ambiguity",
    "detect_inconsistency",
    "detect_modality_conflicts",
    "detect_obligation_conflict",
    "detect_underspecification",
    "direct_program_models",
    "emit_asp",
    "entails",
    "enumerate_events",
    "enumerate_states",
    "executable_actions",
    "ground",
    "load_state",
    "merge_sweeps",
    "oracle_answer_sets",
    "parse",
    "parse_files",
    "parse_ground_atom",
    "parse_ground_literal",
    "parse_json",
    "print_domain",
    "print_policy",
    "reify",
    "render",
    "render_json",
    "render_text",
    "satisfies_constraints",
    "state_space_size",
    "sweep",
    "validate",
]
