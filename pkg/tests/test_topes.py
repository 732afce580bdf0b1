"""
Tests for the tope layer: flattening, the entailment procedure and its
agreement with the model oracle.
"""

import itertools
import random

import pytest

from kernel.errors import BoundExceeded, IllFormedPoint, ParseError
from syntax import parse_expr
from syntax.ast import Cube2, CubeProduct, CubeUnit
from topes import (
    BOTTOM,
    ONE,
    TOP,
    ZERO,
    And,
    Eq,
    Leq,
    Or,
    PointVar,
    answer_query,
    entails,
    enumerate_models,
    eval_tope,
    flatten_tope,
    oracle_entails,
    parse_query,
    satisfiable,
)
from topes.semantics import model_count_table

T, S, R = PointVar("t"), PointVar("s"), PointVar("r")


def atoms(points):
    return [rel(a, b) for a in points for b in points for rel in (Eq, Leq)]


def random_tope(rng, points, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(atoms(points) + [TOP, BOTTOM])
    connective = rng.choice((And, Or))
    return connective(random_tope(rng, points, depth - 1), random_tope(rng, points, depth - 1))


def tope_classes(ctx, points, depth):
    """The shallowest formula of connective depth ≤ `depth` for each set of models."""
    models = list(enumerate_models(ctx))

    def model_set(tope):
        return sum(1 << i for i, model in enumerate(models) if eval_tope(model, tope))

    classes = {}
    for tope in atoms(points) + [TOP, BOTTOM]:
        classes.setdefault(model_set(tope), tope)
    for _ in range(depth):
        layer = list(classes.items())
        for (left_set, left), (right_set, right) in itertools.product(layer, repeat=2):
            classes.setdefault(left_set & right_set, And(left, right))
            classes.setdefault(left_set | right_set, Or(left, right))
    return classes


class TestFlatten:
    """Test flattening of tope expressions over product cubes."""

    def test_interval_variable(self):
        ctx, tope = flatten_tope([("t", Cube2())], parse_expr("t ≡ 0₂"))
        assert ctx == ("t",)
        assert tope == Eq(T, ZERO)

    def test_product_splits_into_components(self):
        """Test that `p : 2 × 2` yields p.1 and p.2."""
        ctx, tope = flatten_tope([("p", CubeProduct(Cube2(), Cube2()))], parse_expr("second p ≤ first p"))
        assert ctx == ("p.1", "p.2")
        assert tope == Leq(PointVar("p.2"), PointVar("p.1"))

    def test_pair_equation_is_conjunction(self):
        ctx, tope = flatten_tope([("p", CubeProduct(Cube2(), Cube2()))], parse_expr("p ≡ (0₂ , 1₂)"))
        assert tope == And(Eq(PointVar("p.1"), ZERO), Eq(PointVar("p.2"), ONE))

    def test_unit_cube_equations_hold(self):
        _, tope = flatten_tope([("u", CubeUnit())], parse_expr("u ≡ *₁"))
        assert tope == TOP

    def test_unknown_variable(self):
        with pytest.raises(IllFormedPoint):
            flatten_tope([("t", Cube2())], parse_expr("x ≡ 0₂"))

    def test_projection_of_interval_point(self):
        with pytest.raises(IllFormedPoint):
            flatten_tope([("t", Cube2())], parse_expr("first t ≡ 0₂"))

    def test_leq_on_pairs_rejected(self):
        with pytest.raises(IllFormedPoint):
            flatten_tope([("p", CubeProduct(Cube2(), Cube2()))], parse_expr("p ≤ p"))


class TestEntailment:
    """Test the decision procedure on hand-picked entailments."""

    def test_endpoints(self):
        assert entails(("t",), [], Leq(ZERO, T))
        assert entails(("t",), [], Leq(T, ONE))
        assert not entails(("t",), [], Eq(T, ZERO))

    def test_linearity(self):
        """Test that any two points are comparable."""
        assert entails(("t", "s"), [], Or(Leq(T, S), Leq(S, T)))

    def test_antisymmetry_and_transitivity(self):
        assert entails(("t", "s"), [Leq(T, S), Leq(S, T)], Eq(T, S))
        assert entails(("t", "s", "r"), [Leq(T, S), Leq(S, R)], Leq(T, R))

    def test_inconsistent_hypotheses_entail_everything(self):
        assert entails(("t",), [Eq(T, ZERO), Eq(T, ONE)], BOTTOM)
        assert not satisfiable(("t",), [Eq(T, ZERO), Eq(T, ONE)])

    def test_zero_below_one(self):
        assert entails((), [Leq(ONE, ZERO)], BOTTOM)

    def test_case_split_on_hypothesis(self):
        """Test reasoning by cases over a disjunctive hypothesis."""
        hyp = Or(Eq(S, ZERO), Eq(T, ONE))
        assert entails(("t", "s"), [hyp], Leq(S, T))

    def test_renamed_queries_agree(self):
        assert entails(("a", "b"), [Leq(PointVar("a"), PointVar("b"))], Leq(PointVar("a"), ONE))


class TestQueries:
    """Test textual queries and countermodels."""

    @pytest.mark.parametrize("query", [
        "t s | s ≡ 0₂ ∨ t ≡ 1₂ |- s ≤ t ∧ (s ≡ 0₂ ∨ t ≡ 1₂ ∨ s ≡ t)",
        "t s | s ≤ t ∧ (s ≡ 0₂ ∨ t ≡ 1₂ ∨ s ≡ t) |- s ≤ t",
        "t | t ≡ 0₂ ∨ t ≡ 1₂ |- ⊤",
    ])
    def test_shape_inclusions(self, query):
        """Test that Λ²₁ ⊆ ∂Δ² ⊆ Δ² and ∂Δ¹ ⊆ Δ¹."""
        answer = answer_query(parse_query(query))
        assert answer.entailed
        assert answer.countermodel is None

    @pytest.mark.parametrize("query", [
        "t s | s ≤ t ∧ (s ≡ 0₂ ∨ t ≡ 1₂ ∨ s ≡ t) |- s ≡ 0₂ ∨ t ≡ 1₂",
        "t s | s ≤ t |- s ≡ 0₂ ∨ t ≡ 1₂ ∨ s ≡ t",
        "t | |- t ≡ 0₂ ∨ t ≡ 1₂",
    ])
    def test_converse_inclusions_fail(self, query):
        """Test that the converse inclusions come with a countermodel."""
        parsed = parse_query(query)
        answer = answer_query(parsed)
        assert not answer.entailed
        model = answer.countermodel
        assert model is not None
        assert all(eval_tope(model, h) for h in parsed.hyps)
        assert not eval_tope(model, parsed.goal)

    def test_countermodel_rendering(self):
        answer = answer_query(parse_query("t | |- t ≡ 0₂ ∨ t ≡ 1₂"))
        assert answer.countermodel.render() == "0 = ∅ < {t} < 1"

    def test_ascii_query(self):
        answer = answer_query(parse_query("t s | s <= t |- s === t \\/ s <= t"))
        assert answer.entailed

    def test_malformed_query(self):
        with pytest.raises(ParseError):
            parse_query("t s s ≤ t")

    def test_bound_exceeded_on_failure(self):
        """Test that the oracle refuses contexts above the bound."""
        query = parse_query("a b c | |- a ≤ b")
        with pytest.raises(BoundExceeded):
            answer_query(query, bound=2)


class TestOracle:
    """Test the model oracle and its agreement with the procedure."""

    def test_model_counts(self):
        assert model_count_table(3) == [1, 3, 11, 51]

    def test_models_are_distinct(self):
        models = list(enumerate_models(("t", "s")))
        assert len(models) == len(set(models)) == 11

    def test_bound(self):
        with pytest.raises(BoundExceeded) as exc_info:
            list(enumerate_models(("a", "b", "c"), bound=2))
        assert exc_info.value.code.value == "E-TOPE-BOUND"

    def test_agreement_on_atoms(self):
        """Test every atomic goal against every atomic hypothesis on two variables."""
        ctx = ("t", "s")
        candidates = atoms([T, S, ZERO, ONE]) + [TOP, BOTTOM]
        for hyp, goal in itertools.product(candidates, repeat=2):
            assert entails(ctx, [hyp], goal) == oracle_entails(ctx, [hyp], goal), (hyp, goal)

    def test_model_classes_cover_the_atoms(self):
        """Test that the class sweep sees every atom and both constants."""
        ctx = ("t", "s")
        classes = tope_classes(ctx, [T, S, ZERO, ONE], depth=0)
        assert len(classes) <= 2 ** 11
        assert 0 in classes and 2 ** 11 - 1 in classes
        assert all(oracle_entails(ctx, [tope], tope) for tope in classes.values())

    def test_agreement_on_random_formulas(self):
        rng = random.Random(20240101)
        ctx = ("t", "s")
        points = [T, S, ZERO, ONE]
        for _ in range(2000):
            hyps = [random_tope(rng, points, 3) for _ in range(rng.randint(0, 2))]
            goal = random_tope(rng, points, 3)
            assert entails(ctx, hyps, goal) == oracle_entails(ctx, hyps, goal), (hyps, goal)

    @pytest.mark.slow
    def test_agreement_on_three_variables(self):
        rng = random.Random(7)
        ctx = ("t", "s", "r")
        points = [T, S, R, ZERO, ONE]
        for _ in range(100_000):
            hyps = [random_tope(rng, points, 3) for _ in range(rng.randint(0, 3))]
            goal = random_tope(rng, points, 3)
            assert entails(ctx, hyps, goal) == oracle_entails(ctx, hyps, goal), (hyps, goal)

    @pytest.mark.slow
    def test_exhaustive_agreement_on_two_variables(self):
        """Test one formula of depth ≤ 3 for every set of models it can carve out.

        Formulas with the same models are interchangeable for the oracle, so
        the sweep keeps the shallowest formula found for each model set.
        """
        ctx = ("t", "s")
        classes = tope_classes(ctx, [T, S, ZERO, ONE], depth=3)
        shallow = tope_classes(ctx, [T, S, ZERO, ONE], depth=1)
        goals = atoms([T, S, ZERO, ONE]) + [TOP, BOTTOM]
        for tope in classes.values():
            assert entails(ctx, [], tope) == oracle_entails(ctx, [], tope), tope
            for goal in goals:
                assert entails(ctx, [tope], goal) == oracle_entails(ctx, [tope], goal), (tope, goal)
            for hyp in shallow.values():
                assert entails(ctx, [hyp], tope) == oracle_entails(ctx, [hyp], tope), (hyp, tope)


class TestEntailmentLaws:
    """Test structural laws of entailment on random formulas."""

    ctx = ("t", "s")
    points = [T, S, ZERO, ONE]

    def test_reflexivity(self):
        rng = random.Random(11)
        for _ in range(1000):
            hyps = [random_tope(rng, self.points, 2) for _ in range(rng.randint(0, 2))]
            tope = random_tope(rng, self.points, 3)
            assert entails(self.ctx, [*hyps, tope], tope), (hyps, tope)

    def test_monotonicity(self):
        """Test that adding a hypothesis never loses an entailment."""
        rng = random.Random(12)
        for _ in range(1000):
            hyps = [random_tope(rng, self.points, 3) for _ in range(rng.randint(0, 2))]
            goal = random_tope(rng, self.points, 3)
            extra = random_tope(rng, self.points, 3)
            if entails(self.ctx, hyps, goal):
                assert entails(self.ctx, [*hyps, extra], goal), (hyps, extra, goal)

    def test_cut(self):
        """Test that an entailed lemma can be used as a hypothesis and dropped."""
        rng = random.Random(13)
        applied = 0
        for _ in range(2000):
            hyps = [random_tope(rng, self.points, 3) for _ in range(rng.randint(1, 2))]
            lemma = Or(hyps[0], random_tope(rng, self.points, 2))
            goal = random_tope(rng, self.points, 3)
            assert entails(self.ctx, hyps, lemma)
            if entails(self.ctx, [*hyps, lemma], goal):
                applied += 1
                assert entails(self.ctx, hyps, goal), (hyps, lemma, goal)
        assert applied > 0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
