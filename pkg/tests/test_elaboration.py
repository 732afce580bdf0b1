"""
Tests for the module system: declaration order, duplicates, sections,
`uses` clauses and generalization at the end of a section.
"""

import pytest

from elaboration import (
    Elaborator,
    EntryKind,
    GlobalEntry,
    GlobalEnv,
    SectionFrame,
    check_uses,
    compute_used_variables,
    register_postulate,
)
from kernel.errors import DuplicateName, ImplicitAssumption, UnusedUses
from models.schemas import DeclarationStatus, Severity
from syntax import alpha_equal, parse_expr, parse_module, pretty_print
from tests.conftest import elaborate, error_codes

SECTION = """#lang rzk-1
#section pointed
#variable A : U
#variable a : A

#def pick uses (a) : A := a
#def pick-again uses (a) : A := pick
#def id-A (x : A) : A := x

#end pointed
"""

HAND_GENERALIZED = """#lang rzk-1
#def pick (A : U) (a : A) : A := a
#def pick-again (A : U) (a : A) : A := pick A a
#def id-A (A : U) (x : A) : A := x
"""


def type_of(env, name):
    return pretty_print(env.lookup(name).type_expr)


class TestDeclarations:
    """Test ordering, duplicates and error recovery."""

    def test_declarations_in_source_order(self):
        module = parse_module("#def A0 : U := U\n#def B0 : U := A0\n")
        report = Elaborator().run(module)
        assert [d.name for d in report.declarations] == ["A0", "B0"]
        assert all(d.status == DeclarationStatus.CHECKED for d in report.declarations)
        assert [d.line for d in report.declarations] == [1, 2]

    def test_error_does_not_stop_later_declarations(self):
        env, diagnostics = elaborate("#def bad : U := nowhere\n#def good : U := U\n")
        assert error_codes(diagnostics) == ["E-UNBOUND"]
        assert "bad" not in env
        assert "good" in env

    def test_failed_status_line(self):
        report = Elaborator().run(parse_module("#def bad : U := nowhere\n"))
        assert report.declarations[0].status == DeclarationStatus.FAILED

    def test_duplicate_definition(self):
        env, diagnostics = elaborate("#def A0 : U := U\n#def A0 : U := U → U\n")
        assert error_codes(diagnostics) == ["E-DUP"]
        assert pretty_print(env.lookup("A0").term) == "U"

    def test_duplicate_across_runs(self):
        env, _ = elaborate("#def A0 : U := U\n")
        _, diagnostics = elaborate("#postulate A0 : U\n", env)
        assert error_codes(diagnostics) == ["E-DUP"]

    def test_input_environment_untouched(self):
        env, _ = elaborate("#def A0 : U := U\n")
        elaborate("#def B0 : U := U\n", env)
        assert "B0" not in env

    def test_postulates_are_opaque(self):
        """Test that a postulate does not compute."""
        source = "#postulate c : U\n#postulate d : U\n#def bad : c = d := refl\n"
        _, diagnostics = elaborate(source)
        assert error_codes(diagnostics) == ["E-TYPE-MISMATCH"]

    def test_register_postulate(self):
        env = register_postulate("X", parse_expr("U"), GlobalEnv())
        assert env.lookup("X").kind == EntryKind.POSTULATED
        with pytest.raises(DuplicateName):
            register_postulate("X", parse_expr("U"), env)


class TestSections:
    """Test section variables and generalization."""

    def test_generalization_over_used_variables(self):
        env, diagnostics = elaborate(SECTION)
        assert error_codes(diagnostics) == []
        assert type_of(env, "pick") == "(A : U) → A → A"
        assert type_of(env, "id-A") == "(A : U) → A → A"

    def test_section_variables_do_not_escape(self):
        env, _ = elaborate(SECTION)
        assert "A" not in env and "a" not in env

    def test_generalized_definitions_compute(self):
        env, _ = elaborate(SECTION)
        _, diagnostics = elaborate("#def check (B : U) (b : B) : pick B b = b := refl\n", env)
        assert error_codes(diagnostics) == []

    def test_callers_inside_section_are_reapplied(self):
        env, _ = elaborate(SECTION)
        _, diagnostics = elaborate("#def check (B : U) (b : B) : pick-again B b = b := refl\n", env)
        assert error_codes(diagnostics) == []

    def test_parameterization_order(self):
        """Test that only the used variable becomes a parameter."""
        source = """
#section two
#variables A B : U
#def id-B (y : B) : B := y
#end two
"""
        env, _ = elaborate(source)
        assert type_of(env, "id-B") == "(B : U) → B → B"

    def test_variable_outside_section(self):
        _, diagnostics = elaborate("#variable A : U\n")
        assert error_codes(diagnostics) == ["E-SECTION"]

    def test_mismatched_end(self):
        _, diagnostics = elaborate("#section a\n#end b\n")
        assert error_codes(diagnostics) == ["E-SECTION"]

    def test_variables_shadow_globals(self):
        source = """
#postulate A : U
#section s
#variable A : U
#def id-A (x : A) : A := x
#end s
"""
        env, diagnostics = elaborate(source)
        assert error_codes(diagnostics) == []
        assert type_of(env, "id-A") == "(A : U) → A → A"
        assert env.lookup("A").kind == EntryKind.POSTULATED

    def test_variables_clash_with_each_other(self):
        _, diagnostics = elaborate("#section s\n#variables A A : U\n#end s\n")
        assert error_codes(diagnostics) == ["E-DUP"]

    def test_nested_sections(self):
        source = """
#section outer
#variable A : U
#section inner
#variable a : A
#def pick uses (a) : A := a
#end inner
#def pick-twice : A → A := \\ x → pick x
#end outer
"""
        env, diagnostics = elaborate(source)
        assert error_codes(diagnostics) == []
        assert type_of(env, "pick-twice") == "(A : U) → A → A"


class TestUses:
    """Test `uses` clauses."""

    def test_missing_uses(self):
        source = SECTION.replace("#def pick uses (a) : A := a", "#def pick : A := a")
        _, diagnostics = elaborate(source)
        assert "E-USES" in error_codes(diagnostics)

    def test_missing_uses_is_transitive(self):
        source = SECTION.replace("#def pick-again uses (a) : A := pick", "#def pick-again : A := pick")
        _, diagnostics = elaborate(source)
        assert error_codes(diagnostics) == ["E-USES"]

    def test_variables_in_statement_need_no_uses(self):
        source = """
#section s
#variable A : U
#variable a : A
#def refl-a : a = a := refl
#end s
"""
        env, diagnostics = elaborate(source)
        assert error_codes(diagnostics) == []
        assert type_of(env, "refl-a").startswith("(A : U) → (a : A) → a =")

    def test_unused_uses_warns(self):
        source = SECTION.replace("#def id-A (x : A)", "#def id-A uses (a) (x : A)")
        env, diagnostics = elaborate(source)
        assert error_codes(diagnostics) == []
        warnings = [d for d in diagnostics if d.severity == Severity.WARNING]
        assert [d.code.value for d in warnings] == ["W-UNUSED-USES"]
        assert "id-A" in env

    def test_uses_outside_section_warns(self):
        _, diagnostics = elaborate("#def A0 uses (funext) : U := U\n")
        assert [d.code.value for d in diagnostics] == ["W-UNUSED-USES"]

    def test_check_uses_report(self):
        report, problems = check_uses("f", ("b",), {"a", "c"}, {"c"})
        assert report.missing == ["a"]
        assert report.unused == ["b"]
        assert not report.ok
        assert isinstance(problems[0], ImplicitAssumption)
        assert isinstance(problems[1], UnusedUses)

    def test_compute_used_variables_follows_definitions(self):
        frame = SectionFrame("s")
        frame.variables["funext"] = GlobalEntry("funext", EntryKind.VARIABLE, None, parse_expr("U"))
        frame.definitions["helper"] = frozenset({"funext"})
        assert compute_used_variables([parse_expr("helper x")], [frame]) == {"funext"}

class TestModuleInvariants:
    """Test that elaboration is repeatable and that sections are only sugar."""

    def test_elaboration_is_deterministic(self, prelude_env):
        source = SECTION + "#def bad : U := nowhere\n"
        first_env, first = elaborate(source, prelude_env)
        second_env, second = elaborate(source, prelude_env)
        assert first == second

        def printed(env):
            return [(e.name, pretty_print(e.type_expr), e.term and pretty_print(e.term)) for e in env]

        assert printed(first_env) == printed(second_env)

    def test_sections_match_hand_generalized_module(self):
        """Test that a sectioned module and its explicit version give α-equal entries."""
        sectioned, _ = elaborate(SECTION)
        by_hand, diagnostics = elaborate(HAND_GENERALIZED)
        assert error_codes(diagnostics) == []
        assert [e.name for e in sectioned] == [e.name for e in by_hand]
        for entry in sectioned:
            other = by_hand.lookup(entry.name)
            assert alpha_equal(entry.type_expr, other.type_expr), entry.name
            assert alpha_equal(entry.term, other.term), entry.name


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
