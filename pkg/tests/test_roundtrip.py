"""Printing and reparsing are inverse up to AST equality."""

from hypothesis import given, settings

from aopl_lint import SourceFile, parse, parse_files, print_domain, print_policy, validate

from helpers import DATA
from strategies import domain_and_policy


@given(domain_and_policy())
@settings(max_examples=150, deadline=None)
def test_print_parse_round_trip(pair):
    policy, domain = pair
    assert not any(d.severity.value == "error" for d in validate(policy, domain))
    source = print_policy(policy, domain)
    result = parse(source)
    assert result.ok, [str(d) for d in result.diagnostics]
    assert result.policy == policy
    assert result.domain == domain


@given(domain_and_policy())
@settings(max_examples=60, deadline=None)
def test_printing_is_a_fixpoint(pair):
    policy, domain = pair
    once = print_policy(policy, domain)
    result = parse(once)
    assert result.ok
    assert print_policy(result.policy, result.domain) == once


def reparse_file_pair(policy_name):
    sources = [
        SourceFile.load(str(DATA / "mission.dom")),
        SourceFile.load(str(DATA / policy_name)),
    ]
    return parse_files(sources)


def test_fixture_round_trip():
    for name in ("mission_strict.aopl", "mission_defeasible.aopl", "mission_ambiguous.aopl"):
        first = reparse_file_pair(name)
        printed = print_policy(first.policy, first.domain)
        second = parse(printed)
        assert second.ok
        assert second.policy == first.policy
        assert second.domain == first.domain
        assert print_policy(second.policy, second.domain) == printed


def test_domain_only_round_trip():
    first = parse(SourceFile.load(str(DATA / "mission.dom")))
    printed = print_domain(first.domain)
    assert parse(printed).domain == first.domain
