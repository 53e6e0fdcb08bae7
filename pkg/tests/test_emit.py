"""Solver-ready text output: golden files, determinism, escaping."""

import pytest

from aopl_lint import emit_asp
from aopl_lint.emit import POLICY_INDEPENDENT_RULES, mangle_label

from helpers import DATA, base_from, make_state

GOLDEN = DATA / "golden"


def golden(name):
    return (GOLDEN / name).read_text(encoding="utf-8")


class TestGoldens:
    def test_defeasible_lp(self, mission_defeasible):
        assert emit_asp(mission_defeasible, variant="lp") == golden("mission_defeasible.lp.golden")

    def test_defeasible_rei(self, mission_defeasible):
        assert emit_asp(mission_defeasible, variant="rei") == golden(
            "mission_defeasible.rei.golden"
        )

    def test_strict_with_state_rei(self, mission_strict):
        state = make_state(mission_strict.ground, "colonel(c)", "authorized(c,m)")
        assert emit_asp(mission_strict, variant="rei", state=state) == golden(
            "mission_strict_state.rei.golden"
        )

    def test_emission_is_deterministic(self, mission_defeasible):
        runs = {emit_asp(mission_defeasible, variant="rei") for _ in range(3)}
        assert len(runs) == 1


class TestStructure:
    def test_rules_sorted_by_label_with_comments(self, mission_defeasible):
        text = emit_asp(mission_defeasible, variant="rei")
        comment_lines = [l for l in text.splitlines() if l.startswith("% ") and "[" in l]
        assert comment_lines == ["% d1[c,m]", "% d2[c,m]", "% o1[c,m]", "% p1[c,m]", "% s3[c,m]"]

    def test_rei_contains_the_fixed_block_verbatim(self, mission_defeasible):
        assert POLICY_INDEPENDENT_RULES.rstrip("\n") in emit_asp(mission_defeasible)

    def test_lp_never_contains_reified_predicates(self, mission_defeasible):
        text = emit_asp(mission_defeasible, variant="lp")
        body = "\n".join(l for l in text.splitlines() if not l.startswith("%"))
        for token in ("rule(", "type(", "mbr(", "head(", "holds("):
            assert token not in body

    def test_state_section_lp_uses_classical_negation(self, mission_strict):
        state = make_state(mission_strict.ground, "colonel(c)")
        text = emit_asp(mission_strict, variant="lp", state=state)
        assert "colonel(c).\n" in text
        assert "-observer(c).\n" in text
        assert "-authorized(c,m).\n" in text

    def test_state_section_rei_wraps_in_holds(self, mission_strict):
        state = make_state(mission_strict.ground, "colonel(c)")
        text = emit_asp(mission_strict, variant="rei", state=state)
        assert "holds(colonel(c)).\n" in text
        assert "holds(neg(observer(c))).\n" in text

    def test_sort_facts_join_the_state_section(self):
        base = base_from(
            "sorts agent: a1.\nfluent f.\naction go(agent).\n"
            "rule r1: permitted(go(A)) if agent(A), f.\n"
        )
        state = make_state(base.ground, "f")
        text = emit_asp(base, variant="rei", state=state)
        assert "holds(agent(a1)).\n" in text

    def test_empty_policy_is_header_only(self):
        base = base_from("")
        assert emit_asp(base, variant="lp") == "% lp program for 0 ground rule(s)\n"

    def test_unknown_variant_raises(self, mission_strict):
        with pytest.raises(ValueError, match="unknown emission variant"):
            emit_asp(mission_strict, variant="smt")


class TestTerms:
    @pytest.mark.parametrize(
        "label,expected",
        [
            ("d1[c,m]", "d1(c,m)"),
            ("d1[c]", "d1(c)"),
            ("d1", "d1"),
            ("p1[c1,m2]", "p1(c1,m2)"),
        ],
    )
    def test_mangle_label(self, label, expected):
        assert mangle_label(label) == expected

    def test_negative_obligation_head_terms(self):
        base = base_from("action go.\nrule r1: obl(-go).\nrule r2: !obl(go).\n")
        text = emit_asp(base, variant="rei")
        assert "head(r1, obl(neg(go))).\n" in text
        assert "head(r2, neg(obl(go))).\n" in text
        lp = emit_asp(base, variant="lp")
        assert "obl(neg(go)).\n" in lp
        assert "-obl(go).\n" in lp

    def test_text_strings_are_escaped(self):
        base = base_from('action go.\nrule r1: permitted(go).\ntext r1: "say \\"hi\\"\\nplease".\n')
        text = emit_asp(base, variant="rei")
        assert 'text(r1, "say \\"hi\\"\\nplease").' in text
