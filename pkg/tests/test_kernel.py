"""
Tests for the kernel: checking, conversion, extension types and topes in
context. Each case elaborates a small source on top of a shared prelude.
"""

import pytest

from corpus import load_manifest, required_paths
from elaboration import EntryKind
from kernel.checker import check, check_type, infer, normalize_typed
from kernel.context import Context
from kernel.errors import CannotInfer, NotAType
from kernel.values import VUniverse
from pipeline import TypecheckOrchestrator
from syntax import alpha_equal, parse_expr, pretty_print
from tests.conftest import elaborate, error_codes


def codes(source, env):
    _, diagnostics = elaborate("#lang rzk-1\n" + source, env)
    return error_codes(diagnostics)


class TestBasicTyping:
    """Test functions, pairs and identity types."""

    def test_identity_function(self, prelude_env):
        assert codes("#def id (A : U) (x : A) : A := x", prelude_env) == []

    def test_wrong_result_type(self, prelude_env):
        assert codes("#def bad (A B : U) (x : A) : B := x", prelude_env) == ["E-TYPE-MISMATCH"]

    def test_unbound_name(self, prelude_env):
        assert codes("#def bad (A : U) : A := nowhere", prelude_env) == ["E-UNBOUND"]

    def test_not_a_function(self, prelude_env):
        assert codes("#def bad (A : U) (x : A) : A := x x", prelude_env) == ["E-NOT-FUNCTION"]

    def test_not_a_pair(self, prelude_env):
        assert codes("#def bad (A : U) (x : A) : A := first x", prelude_env) == ["E-NOT-PAIR"]

    def test_hole_reports_expected_type(self, prelude_env):
        _, diagnostics = elaborate("#def todo (A : U) : A → A := ?", prelude_env)
        (d,) = diagnostics
        assert d.code.value == "E-HOLE"
        assert d.expected == "A → A"

    def test_sigma_pairs_and_projections(self, prelude_env):
        source = """
#def swap (A B : U) (p : Σ (x : A) , B) : Σ (y : B) , A := (second p , first p)
"""
        assert codes(source, prelude_env) == []

    def test_dependent_pair(self, prelude_env):
        source = "#def based (A : U) (a : A) : Σ (x : A) , a = x := (a , refl)"
        assert codes(source, prelude_env) == []

    def test_refl_needs_convertible_sides(self, prelude_env):
        assert codes("#def bad (A : U) (x y : A) : x = y := refl", prelude_env) == ["E-TYPE-MISMATCH"]

    def test_path_induction(self, prelude_env):
        source = """
#def sym (A : U) (x y : A) (p : x = y) : y = x
  := idJ(A , x , \\ y' p' → y' = x , refl , y , p)
"""
        assert codes(source, prelude_env) == []

    def test_path_induction_computes(self, prelude_env):
        source = """
#def J (A : U) (a : A) (C : (x : A) → a = x → U) (d : C a refl) (x : A) (p : a = x) : C x p
  := idJ(A , a , C , d , x , p)
#def J-refl (A : U) (a : A) (C : (x : A) → a = x → U) (d : C a refl) : J A a C d a refl = d
  := refl
"""
        assert codes(source, prelude_env) == []


class TestConversion:
    """Test β, η and unfolding of definitions."""

    @pytest.mark.parametrize("statement", [
        "(A : U) (a : A) : ((\\ x → x) as A → A) a = a",
        "(A B : U) (f : A → B) : (\\ x → f x) =_{A → B} f",
        "(A B : U) (p : Σ (x : A) , B) : (first p , second p) =_{Σ (x : A) , B} p",
        "(A B : U) (a : A) (b : B) : first ((a , b) as Σ (x : A) , B) = a",
    ])
    def test_refl_checks(self, prelude_env, statement):
        assert codes(f"#def eq {statement} := refl", prelude_env) == []

    def test_definitions_unfold(self, prelude_env):
        source = """
#def twice (A : U) (f : A → A) (x : A) : A := f (f x)
#def twice-id (A : U) (x : A) : twice A (\\ y → y) x = x := refl
"""
        assert codes(source, prelude_env) == []

    def test_eta_for_functions_into_pairs(self, prelude_env):
        source = """
#def eta (A B : U) (f : A → Σ (x : B) , B) : f =_{A → Σ (x : B) , B} (\\ a → (first (f a) , second (f a)))
  := refl
"""
        assert codes(source, prelude_env) == []


class TestExtensionTypes:
    """Test shapes, refinements and boundary checking."""

    def test_identity_arrow(self, prelude_env):
        assert codes("#def idh (A : U) (x : A) : hom A x x := \\ t → x", prelude_env) == []

    def test_swapped_endpoints(self, prelude_env):
        """Test that a constant arrow cannot end at a different point."""
        source = "#def bad (A : U) (x y : A) : hom A x y := \\ t → x"
        assert codes(source, prelude_env) == ["E-BOUNDARY"]

    def test_boundary_error_shows_both_sides(self, prelude_env):
        _, diagnostics = elaborate("#def bad (A : U) (x y : A) : hom A x y := \\ t → x", prelude_env)
        (d,) = diagnostics
        assert d.expected == "y"
        assert d.actual == "x"
        assert d.location is not None

    def test_arrow_computes_at_endpoints(self, prelude_env):
        source = """
#def at-0 (A : U) (x y : A) (f : hom A x y) : f 0₂ = x := refl
#def at-1 (A : U) (x y : A) (f : hom A x y) : f 1₂ = y := refl
"""
        assert codes(source, prelude_env) == []

    def test_point_outside_shape(self, prelude_env):
        """Test that applying a boundary map to an interior point fails."""
        source = "#def bad (A : U) (f : (t : 2 | t ≡ 0₂ ∨ t ≡ 1₂) → A) : (t : 2) → A := \\ t → f t"
        assert codes(source, prelude_env) == ["E-TOPE"]

    def test_restriction_to_subshape(self, prelude_env):
        source = """
#def restrict (A : U) (f : ((t , s) : Δ²) → A) : ((t , s) : Λ²₁) → A := \\ (t , s) → f (t , s)
"""
        assert codes(source, prelude_env) == []

    def test_extension_values_pass_their_refinement(self, prelude_env):
        """Test that an arrow is accepted where its own boundary is required."""
        source = """
#def reuse (A : U) (x y : A) (f : hom A x y) : (t : Δ¹) → A [t ≡ 1₂ ↦ y] := f
"""
        assert codes(source, prelude_env) == []


class TestTopesInContext:
    """Test recOR, recBOT and reasoning under tope hypotheses."""

    def test_gluing_a_horn(self, prelude_env):
        source = """
#def glue (A : U) (x y z : A) (f : hom A x y) (g : hom A y z) : ((t , s) : Λ²₁) → A
  := \\ (t , s) → recOR(s ≡ 0₂ ↦ f t , t ≡ 1₂ ↦ g s)
#def glue-edge (A : U) (x y z : A) (f : hom A x y) (g : hom A y z) (t : Δ¹)
  : glue A x y z f g (t , 0₂) = f t
  := refl
"""
        assert codes(source, prelude_env) == []

    def test_branches_must_cover(self, prelude_env):
        source = """
#def bad (A : U) (x y : A) (f : hom A x y) : ((t , s) : Λ²₁) → A
  := \\ (t , s) → recOR(s ≡ 0₂ ↦ f t)
"""
        assert codes(source, prelude_env) == ["E-TOPE"]

    def test_branches_must_agree(self, prelude_env):
        """Test that overlapping branches with different values are rejected."""
        source = """
#def bad (A : U) (x y : A) : (t : 2) → A
  := \\ t → recOR(t ≤ 0₂ ↦ x , 0₂ ≤ t ↦ y)
"""
        assert codes(source, prelude_env) == ["E-BOUNDARY"]

    def test_gluing_along_the_diagonal(self, prelude_env):
        """Test a square built from two triangles that agree on t ≡ s."""
        source = """
#def square (A : U) (f : (t : 2) → A) : ((t , s) : 2 × 2) → A
  := \\ (t , s) → recOR(t ≤ s ↦ f t , s ≤ t ↦ f s)
"""
        assert codes(source, prelude_env) == []

    def test_rec_bot_needs_contradiction(self, prelude_env):
        assert codes("#def bad (A : U) : (t : 2) → A := \\ t → recBOT", prelude_env) == ["E-TOPE"]

    def test_anything_under_contradiction(self, prelude_env):
        source = """
#def vac (A : U) (a b : A) : (t : 2 | t ≡ 0₂ ∧ t ≡ 1₂) → a = b := \\ t → recBOT
#def vac-refl (A : U) (a b : A) : (t : 2 | ⊥) → a = b := \\ t → refl
"""
        assert codes(source, prelude_env) == []


class TestNormalization:
    """Test normal forms and type synthesis through the public entry points."""

    def test_normalize_application(self, prelude_env):
        normal_form, type_ = TypecheckOrchestrator.normalize("((\\ x → x) as U → U) U", prelude_env)
        assert normal_form == "U"
        assert type_ == "U"

    def test_normalize_unfolds_globals(self, prelude_env):
        _, type_ = TypecheckOrchestrator.normalize("id-hom", prelude_env)
        assert "A [" in type_ or "↦" in type_

    def test_cannot_infer_bare_lambda(self, prelude_env):
        with pytest.raises(CannotInfer):
            infer(Context(prelude_env), parse_expr("\\ x → x"))

    def test_check_type_rejects_terms(self, prelude_env):
        with pytest.raises(NotAType):
            check_type(Context(prelude_env), parse_expr("0₂"))

    def test_normalize_typed_returns_expressions(self, prelude_env):
        term, type_ = normalize_typed(Context(prelude_env), parse_expr("hom"))
        assert pretty_print(type_) == "(A : U) → A → A → U"

class TestTopeSplits:
    """Test goals that only hold by splitting on the hypotheses."""

    @pytest.mark.parametrize("tope", ["t ≡ 0₂ ∨ t ≡ 1₂", "t ≡ 0₂", "t ≡ 1₂"])
    def test_boundary_value_by_cases(self, prelude_env, tope):
        """Test that a goal proved by cases also holds under each case alone."""
        source = f"""
#def by-cases (A : U) (a b : A) (f : hom A a b) (t : 2 | {tope})
  : f t = recOR(t ≡ 0₂ ↦ a , t ≡ 1₂ ↦ b)
  := refl
"""
        assert codes(source, prelude_env) == []

    def test_split_needs_covering_hypotheses(self, prelude_env):
        source = """
#def bad (A : U) (a b : A) (f : hom A a b) (t : 2 | t ≡ 0₂ ∨ t ≡ 1₂) : f t =_{A} a := refl
"""
        assert codes(source, prelude_env) == ["E-TYPE-MISMATCH"]


class TestRefinementEquality:
    """Test refinements that say nothing and refinements that contradict themselves."""

    def test_vacuous_refinement_is_the_carrier(self, prelude_env):
        ctx, carrier = Context(prelude_env).bind("A", VUniverse())
        _, refined = check_type(ctx, parse_expr("A [⊥ ↦ recBOT]"))
        conv = ctx.conversion()
        assert conv.equal_types(carrier, refined)
        assert conv.equal_types(refined, carrier)

    def test_vacuous_refinement_in_both_directions(self, prelude_env):
        source = """
#def to-refined (A : U) (a : A) : A [⊥ ↦ recBOT] := a
#def from-refined (A : U) (a : A [⊥ ↦ recBOT]) : A := a
"""
        assert codes(source, prelude_env) == []

    def test_conflicting_constraints_rejected_at_formation(self, prelude_env):
        """Test that two constraints on the same tope must agree."""
        source = "#def bad (A : U) (a b : A) : (t : 2) → A [t ≡ 0₂ ↦ a , t ≡ 0₂ ↦ b] := \\ t → a"
        _, diagnostics = elaborate("#lang rzk-1\n" + source, prelude_env)
        assert error_codes(diagnostics) == ["E-BOUNDARY"]
        assert "constraints 1 and 2 disagree" in diagnostics[0].message


@pytest.mark.slow
class TestCorpusNormalForms:
    """Test normal forms of every Required library definition."""

    @pytest.fixture(scope="class")
    def library_env(self):
        _, env = TypecheckOrchestrator().typecheck_paths(required_paths(load_manifest()))
        return env

    @staticmethod
    def normal_forms(env):
        ctx = Context(env)
        readback = ctx.readback()
        for entry in env:
            if entry.kind == EntryKind.DEFINED:
                yield ctx, entry, readback.term(ctx.eval(entry.term), entry.type_)

    def test_normalization_is_idempotent(self, library_env):
        for ctx, entry, normal_form in self.normal_forms(library_env):
            again = ctx.readback().term(ctx.eval(normal_form), entry.type_)
            assert alpha_equal(normal_form, again), entry.name

    def test_normal_forms_check(self, library_env):
        """Test that every normal form still has the declared type."""
        for ctx, entry, normal_form in self.normal_forms(library_env):
            check(ctx, normal_form, entry.type_)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
