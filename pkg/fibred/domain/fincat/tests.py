from dataclasses import replace

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from utils.django.exceptions import MalformedTable, ShapeMismatch, SizeLimitExceeded

from .generators import cyclic_group, random_category
from .models import FinCat, FinCatFactory, FinFunctorFactory, NatTransFactory
from .services import FinCatServices, FinFunctorServices, NatTransServices

categories = st.randoms(use_true_random=False).map(lambda rng: random_category(rng))
small_categories = st.randoms(use_true_random=False).map(
    lambda rng: random_category(rng, max_objects=3, max_morphisms=8)
)


class FinCatTests(SimpleTestCase):
    def setUp(self):
        self.terminal = FinCatFactory.build_terminal()
        self.arrow = FinCatFactory.build_walking_arrow()
        self.discrete = FinCatFactory.build_discrete(["a", "b"])

    def test_terminal_passes(self):
        self.assertTrue(FinCatServices.check_category(self.terminal).passed)

    def test_walking_arrow_has_three_morphisms(self):
        self.assertEqual(len(self.arrow.morphisms), 3)
        self.assertTrue(FinCatServices.check_category(self.arrow).passed)

    def test_redirected_composite_is_reported(self):
        z3 = cyclic_group(3)
        poset = FinCatServices.product(self.arrow, z3)
        g, f = next(
            (g, f)
            for g, f in poset.composable_pairs()
            if not poset.is_identity(g) and not poset.is_identity(f)
        )
        wrong = next(
            h
            for h in poset.mor_ids
            if poset.morphisms[h] != poset.morphisms[poset.compose[(g, f)]]
        )
        mutated = replace(poset, compose={**poset.compose, (g, f): wrong})
        report = FinCatServices.check_category(mutated)
        self.assertFalse(report.passed)
        self.assertEqual(report.first("composite-typing").witness, (g, f))

    def test_missing_composite_raises(self):
        compose = dict(self.arrow.compose)
        compose.pop(next(iter(compose)))
        with self.assertRaises(MalformedTable):
            FinCatServices.check_category(replace(self.arrow, compose=compose))

    def test_opposite_of_terminal_is_terminal(self):
        self.assertEqual(FinCatServices.opposite(self.terminal), self.terminal)

    def test_opposite_reverses_the_arrow(self):
        op = FinCatServices.opposite(self.arrow)
        self.assertEqual(op.morphisms["0<=1"], ("1", "0"))

    def test_product_with_terminal(self):
        prod = FinCatServices.product(self.arrow, self.terminal)
        self.assertIsNotNone(FinFunctorServices.find_isomorphism(prod, self.arrow))

    def test_discrete_squared_is_discrete(self):
        prod = FinCatServices.product(self.discrete, self.discrete)
        self.assertEqual(len(prod.objects), 4)
        self.assertEqual(len(prod.morphisms), 4)

    def test_walking_arrow_squared_has_nine_morphisms(self):
        square = FinCatServices.product(self.arrow, self.arrow)
        self.assertEqual(len(square.morphisms), 9)
        self.assertTrue(FinCatServices.check_category(square).passed)

    @settings(deadline=None, max_examples=60)
    @given(categories)
    def test_generated_categories_are_closed_under_opposite_and_product(self, c):
        self.assertTrue(FinCatServices.check_category(c).passed)
        op = FinCatServices.opposite(c)
        self.assertTrue(FinCatServices.check_category(op).passed)
        self.assertEqual(FinCatServices.opposite(op), c)
        prod = FinCatServices.product(c, self.arrow)
        self.assertTrue(FinCatServices.check_category(prod).passed)
        self.assertEqual(len(prod.objects), 2 * len(c.objects))


class FinFunctorTests(SimpleTestCase):
    def setUp(self):
        self.arrow = FinCatFactory.build_walking_arrow()
        self.identity = FinFunctorFactory.build_identity(self.arrow)

    def test_identity_functor_passes(self):
        self.assertTrue(FinFunctorServices.check_functor(self.identity).passed)

    def test_constant_functor_passes(self):
        const = FinFunctorFactory.build_constant(self.arrow, self.arrow, "1")
        self.assertTrue(FinFunctorServices.check_functor(const).passed)

    def test_broken_tables_are_reported(self):
        z2 = cyclic_group(2)
        F = FinFunctorFactory.build_identity(z2)
        broken = replace(F, mor_map={"r0": "r0", "r1": "r0"})
        self.assertTrue(FinFunctorServices.check_functor(broken).passed)
        broken = replace(F, mor_map={"r0": "r1", "r1": "r1"})
        report = FinFunctorServices.check_functor(broken)
        self.assertTrue(report.failed("identity"))
        self.assertTrue(report.failed("composition"))

    def test_composition_needs_matching_ends(self):
        other = FinFunctorFactory.build_identity(cyclic_group(2))
        with self.assertRaises(ShapeMismatch):
            FinFunctorServices.compose_functors(other, self.identity)

    @settings(deadline=None, max_examples=40)
    @given(small_categories)
    def test_composition_is_unital_and_associative(self, c):
        one = FinFunctorFactory.build_identity(c)
        swap = FinFunctorServices.swap_functor(c, c)
        back = FinFunctorServices.swap_functor(c, c)
        compose = FinFunctorServices.compose_functors
        self.assertEqual(compose(one, one), one)
        twice = compose(back, swap)
        self.assertEqual(twice.obj_map, {x: x for x in twice.source.objects})
        self.assertEqual(
            compose(compose(back, swap), back), compose(back, compose(swap, back))
        )

    def test_isomorphism_with_itself(self):
        found = FinFunctorServices.find_isomorphism(self.arrow, self.arrow)
        self.assertIsNotNone(found)
        forward, backward = found
        self.assertEqual(forward.obj_map, {"0": "0", "1": "1"})
        self.assertTrue(FinFunctorServices.check_functor(backward).passed)

    def test_discrete_and_arrow_are_not_isomorphic(self):
        discrete = FinCatFactory.build_discrete(["a", "b"])
        self.assertIsNone(FinFunctorServices.find_isomorphism(discrete, self.arrow))

    def test_size_limit(self):
        big = FinCatFactory.build_discrete([str(i) for i in range(8)])
        with self.assertRaises(SizeLimitExceeded):
            FinFunctorServices.find_isomorphism(big, big, max_objects=6)

    @settings(deadline=None, max_examples=40)
    @given(small_categories, small_categories)
    def test_isomorphism_search_is_symmetric(self, c, d):
        there = FinFunctorServices.find_isomorphism(c, d)
        back = FinFunctorServices.find_isomorphism(d, c)
        self.assertEqual(there is None, back is None)
        if there is not None:
            self.assertTrue(FinFunctorServices.check_functor(there[0]).passed)
            self.assertTrue(FinFunctorServices.check_functor(there[1]).passed)

    @settings(deadline=None, max_examples=30)
    @given(small_categories)
    def test_relabelled_copy_is_found_isomorphic(self, c):
        relabelled = FinCatFactory.build_entity(
            objects=[f"o{x}" for x in c.objects],
            morphisms={
                f"m{f}": (f"o{x}", f"o{y}") for f, (x, y) in c.morphisms.items()
            },
            identity={f"o{x}": f"m{f}" for x, f in c.identity.items()},
            compose={(f"m{g}", f"m{f}"): f"m{h}" for (g, f), h in c.compose.items()},
        )
        self.assertIsNotNone(FinFunctorServices.find_isomorphism(c, relabelled))


class NatTransTests(SimpleTestCase):
    def setUp(self):
        self.arrow = FinCatFactory.build_walking_arrow()
        self.identity = FinFunctorFactory.build_identity(self.arrow)
        self.to_one = FinFunctorFactory.build_constant(self.arrow, self.arrow, "1")
        self.to_zero = FinFunctorFactory.build_constant(self.arrow, self.arrow, "0")

    def test_identity_transformation_passes(self):
        t = NatTransFactory.build_identity(self.identity)
        self.assertTrue(NatTransServices.check_nat_trans(t).passed)

    def test_unit_into_terminal_value_is_natural(self):
        t = NatTransFactory.build_entity(
            self.identity, self.to_one, {"0": "0<=1", "1": "1<=1"}
        )
        self.assertTrue(NatTransServices.check_nat_trans(t).passed)

    def test_non_natural_family_is_reported(self):
        z2 = cyclic_group(2)
        F = FinFunctorFactory.build_constant(self.arrow, z2, "*")
        G = FinFunctorFactory.build_entity(
            self.arrow,
            z2,
            {"0": "*", "1": "*"},
            {"0<=0": "r0", "0<=1": "r0", "1<=1": "r0"},
        )
        t = NatTransFactory.build_entity(F, G, {"0": "r1", "1": "r0"})
        report = NatTransServices.check_nat_trans(t)
        self.assertEqual(report.first("naturality").witness, ("0<=1",))

    def test_vertical_composition_and_whiskering(self):
        unit = NatTransFactory.build_entity(
            self.to_zero, self.identity, {"0": "0<=0", "1": "0<=1"}
        )
        counit = NatTransFactory.build_entity(
            self.identity, self.to_one, {"0": "0<=1", "1": "1<=1"}
        )
        both = NatTransServices.vertical_compose(counit, unit)
        self.assertEqual(both.components, {"0": "0<=1", "1": "0<=1"})
        self.assertTrue(NatTransServices.check_nat_trans(both).passed)
        whiskered = NatTransServices.whisker(counit, inner=self.to_zero)
        self.assertTrue(NatTransServices.check_nat_trans(whiskered).passed)

    def test_interchange_law(self):
        unit = NatTransFactory.build_entity(
            self.to_zero, self.identity, {"0": "0<=0", "1": "0<=1"}
        )
        counit = NatTransFactory.build_entity(
            self.identity, self.to_one, {"0": "0<=1", "1": "1<=1"}
        )
        one_zero = NatTransFactory.build_identity(self.to_zero)
        one_one = NatTransFactory.build_identity(self.to_one)
        vertical = NatTransServices.vertical_compose
        horizontal = NatTransServices.horizontal_compose
        left = horizontal(vertical(counit, unit), vertical(one_one, one_one))
        right = vertical(horizontal(counit, one_one), horizontal(unit, one_one))
        self.assertEqual(left.components, right.components)

    def test_mismatched_vertical_composition(self):
        unit = NatTransFactory.build_entity(
            self.to_zero, self.identity, {"0": "0<=0", "1": "0<=1"}
        )
        with self.assertRaises(ShapeMismatch):
            NatTransServices.vertical_compose(unit, unit)


class FinCatServicesTests(SimpleTestCase):
    def test_get_fincat_factory(self):
        self.assertEqual(FinCatServices().get_fincat_factory(), FinCatFactory)

    def test_factory_builds_fincat(self):
        self.assertIsInstance(FinCatFactory.build_terminal(), FinCat)
