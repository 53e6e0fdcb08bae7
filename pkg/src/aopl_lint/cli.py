"""Command line interface.

Exit codes: 0 when no findings are reported, 1 when the requested analysis
reports findings, 2 on usage, parse, or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .analysis import (
    InstanceRecord,
    SweepLimitError,
    SweepOptions,
    SweepResult,
    classify_compliance,
    detect_ambiguity,
    detect_inconsistency,
    detect_modality_conflicts,
    detect_obligation_conflict,
    detect_underspecification,
    sweep,
)
from .diagnostics import SourceFile
from .emit import emit_asp
from .engine import answer_sets
from .grounding import ground
from .parser import parse_files, parse_ground_atom
from .report import build_report, render
from .reify import reify
from .states import (
    DEFAULT_MAX_STATES,
    check_pins,
    enumerate_states,
    executable_actions,
    load_state,
    parse_pins,
    state_space_size,
)


def _default_max_states() -> int:
    raw = os.environ.get("AOPL_LINT_MAX_STATES")
    if raw is None:
        return DEFAULT_MAX_STATES
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_MAX_STATES


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "files",
        nargs="+",
        metavar="FILE",
        help="domain and policy source files, merged in order",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aopl-lint",
        description="Analyze authorization and obligation policies for "
        "inconsistency, coverage gaps, ambiguity, and conflicting directives.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser(
        "analyze", help="sweep the state space and report finding families"
    )
    _add_common(analyze)
    analyze.add_argument(
        "--pin",
        action="append",
        default=[],
        metavar="LITERAL",
        help="fix a state literal, e.g. 'colonel(c)' or '!authorized(c,m)'",
    )
    analyze.add_argument("--max-states", type=int, default=_default_max_states())
    analyze.add_argument("--format", choices=("text", "json"), default="text")
    analyze.add_argument("-o", "--output", metavar="PATH")

    check = commands.add_parser("check", help="report findings in one state")
    _add_common(check)
    check.add_argument("--state", required=True, metavar="PATH")
    check.add_argument(
        "--action",
        metavar="ATOM",
        help="restrict the report to one ground action",
    )
    check.add_argument("--format", choices=("text", "json"), default="text")

    classify = commands.add_parser(
        "classify", help="classify an event's compliance in one state"
    )
    _add_common(classify)
    classify.add_argument("--state", required=True, metavar="PATH")
    classify.add_argument(
        "--do",
        action="append",
        default=[],
        metavar="ATOM",
        dest="event",
        help="ground action performed as part of the event (repeatable)",
    )

    emit = commands.add_parser("emit-asp", help="print the policy as ASP text")
    _add_common(emit)
    emit.add_argument("--variant", choices=("lp", "rei"), default="rei")
    emit.add_argument("--state", metavar="PATH")
    emit.add_argument("-o", "--output", metavar="PATH")

    states_cmd = commands.add_parser("states", help="enumerate the state space")
    _add_common(states_cmd)
    states_cmd.add_argument("--pin", action="append", default=[], metavar="LITERAL")
    states_cmd.add_argument("--limit", type=int, default=None)
    states_cmd.add_argument("--max-states", type=int, default=_default_max_states())

    return parser


class _InputError(Exception):
    pass


def _load_base(paths: list[str]):
    sources = []
    for path in paths:
        try:
            sources.append(SourceFile.load(path))
        except OSError as exc:
            raise _InputError(f"cannot read {path}: {exc}") from exc
    result = parse_files(sources)
    if not result.ok:
        raise _InputError(
            "\n".join(str(d) for d in result.diagnostics)
        )
    for diag in result.diagnostics:
        print(str(diag), file=sys.stderr)
    return sources, reify(ground(result.policy, result.domain))


def _load_state_file(base, path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    state, diagnostics = load_state(base.ground, text)
    if state is None:
        raise _InputError("\n".join(f"{path}: {d.message}" for d in diagnostics))
    return state


def _parse_action(base, text: str):
    try:
        atom = parse_ground_atom(text)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    if atom not in base.ground.action_atoms:
        raise _InputError(f"{atom} is not a ground action of this domain")
    return atom


def _parse_pin_args(texts: list[str]):
    try:
        return tuple(parse_pins(texts))
    except ValueError as exc:
        raise _InputError(str(exc)) from exc


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _source_labels(sources) -> tuple[str | None, str | None, str | None, str | None]:
    """Pick (domain path, domain text, policy path, policy text) for a report."""
    if len(sources) == 1:
        only = sources[0]
        return only.path, only.text, only.path, only.text
    domain = sources[0]
    policy_path = "+".join(s.path for s in sources[1:])
    policy_text = "".join(s.text for s in sources[1:])
    return domain.path, domain.text, policy_path, policy_text


def _cmd_analyze(args) -> int:
    sources, base = _load_base(args.files)
    pins = _parse_pin_args(args.pin)
    try:
        result = sweep(base, SweepOptions(pins=pins, max_states=args.max_states))
    except (SweepLimitError, ValueError) as exc:
        raise _InputError(str(exc)) from None
    domain_path, domain_text, policy_path, policy_text = _source_labels(sources)
    report = build_report(
        result,
        domain_path=domain_path,
        domain_text=domain_text,
        policy_path=policy_path,
        policy_text=policy_text,
        pins=tuple(str(p) for p in pins),
    )
    _write_output(render(report, args.format), args.output)
    return 1 if report.families else 0


def _cmd_check(args) -> int:
    sources, base = _load_base(args.files)
    state = _load_state_file(base, args.state)
    only = _parse_action(base, args.action) if args.action else None

    models = answer_sets(base, state)
    executable = set(executable_actions(base.ground, state))
    records = []
    records.extend(
        r
        for r in detect_inconsistency(base, state, models=models)
        if r.action.action in executable
    )
    for action in base.ground.action_atoms:
        if action not in executable:
            continue
        gap = detect_underspecification(base, state, action, models=models)
        if gap is not None:
            records.append(gap)
        ambiguity, _ = detect_ambiguity(base, state, action, models=models)
        if ambiguity is not None:
            records.append(ambiguity)
        records.extend(detect_obligation_conflict(base, state, action, models=models))
    records.extend(
        r
        for r in detect_modality_conflicts(base, state, models=models)
        if r.action.action in executable
    )
    if only is not None:
        records = [r for r in records if r.action.action == only]

    result = SweepResult(
        instances=tuple(
            InstanceRecord(record=r, states=frozenset({state}))
            for r in sorted(records, key=lambda r: r.key())
        ),
        states_examined=1,
    )
    domain_path, domain_text, policy_path, policy_text = _source_labels(sources)
    report = build_report(
        result,
        domain_path=domain_path,
        domain_text=domain_text,
        policy_path=policy_path,
        policy_text=policy_text,
    )
    _write_output(render(report, args.format), None)
    return 1 if report.families else 0


def _cmd_classify(args) -> int:
    _, base = _load_base(args.files)
    state = _load_state_file(base, args.state)
    event = tuple(_parse_action(base, text) for text in args.event)

    compliance = classify_compliance(base, state, event)
    print(f"state: {state}")
    event_display = ", ".join(str(a) for a in event)
    print(f"event: {{{event_display}}}")
    for action, verdict in compliance.action_classes:
        print(f"{action}: {verdict.value}")
    if compliance.strongly_compliant:
        level = "strongly compliant"
    elif compliance.weakly_compliant:
        level = "weakly compliant"
    else:
        level = "non compliant"
    print(f"event authorization: {level}")
    obligations = "satisfied" if compliance.obligation_compliant else "violated"
    print(f"event obligations: {obligations}")
    return 0


def _cmd_emit_asp(args) -> int:
    _, base = _load_base(args.files)
    state = _load_state_file(base, args.state) if args.state else None
    _write_output(emit_asp(base, variant=args.variant, state=state), args.output)
    return 0


def _cmd_states(args) -> int:
    _, base = _load_base(args.files)
    pins = _parse_pin_args(args.pin)
    problems = check_pins(base.ground, pins)
    if problems:
        raise _InputError("\n".join(d.message for d in problems))
    size = state_space_size(base.ground, pins)
    if size > args.max_states:
        raise _InputError(
            f"state space holds {size} assignments, above the limit of "
            f"{args.max_states}; pin atoms or raise the limit"
        )
    count = 0
    for state in enumerate_states(base.ground, pins):
        print(str(state))
        count += 1
        if args.limit is not None and count >= args.limit:
            break
    return 0


_HANDLERS = {
    "analyze": _cmd_analyze,
    "check": _cmd_check,
    "classify": _cmd_classify,
    "emit-asp": _cmd_emit_asp,
    "states": _cmd_states,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except _InputError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
