from dataclasses import replace

from django.test import SimpleTestCase

from fibred.domain.fincat.generators import cyclic_group
from fibred.domain.fincat.models import (
    FinCatFactory,
    FinFunctorFactory,
    NatTransFactory,
)
from fibred.domain.zoo.models import FinSetSkeleton
from utils.django.exceptions import (
    BaseNotCocartesian,
    ShapeMismatch,
    SizeLimitExceeded,
    UnknownObject,
)

from .models import MonoidalFactory, MonoidalFunctorFactory
from .services import CocartesianServices, MonoidalServices


class MonoidalDataTests(SimpleTestCase):
    def setUp(self):
        self.finset = FinSetSkeleton(3)
        self.plus = self.finset.witness.monoidal

    def test_trivial_structure_passes(self):
        trivial = MonoidalFactory.build_trivial(FinCatFactory.build_terminal())
        self.assertTrue(MonoidalServices.check_monoidal(trivial).passed)

    def test_cyclic_group_under_composition_passes(self):
        z3 = MonoidalFactory.build_trivial(cyclic_group(3))
        self.assertTrue(MonoidalServices.check_monoidal(z3).passed)

    def test_finset_sum_passes_and_is_strict(self):
        report = MonoidalServices.check_monoidal(self.plus)
        self.assertTrue(report.passed, report.violations)
        base = self.plus.base
        self.assertTrue(all(map(base.is_identity, self.plus.associator.values())))
        self.assertTrue(any("outside the universe" in note for note in report.notes))

    def test_pentagon_broken_by_an_automorphism(self):
        associator = dict(self.plus.associator)
        associator[("1", "1", "0")] = "2>2:10"
        mutated = replace(self.plus, associator=associator)
        report = MonoidalServices.check_monoidal(mutated)
        self.assertTrue(report.failed("pentagon"))

    def test_tensor_lookups(self):
        self.assertEqual(MonoidalServices.tensor_of(self.plus, "0", "2"), "2")
        self.assertEqual(MonoidalServices.tensor_of(self.plus, "1", "2"), "3")
        one = self.plus.base.id("1")
        self.assertEqual(
            MonoidalServices.tensor_mor(self.plus, one, one), self.plus.base.id("2")
        )
        self.assertEqual(
            MonoidalServices.tensor_mor(self.plus, "1>2:1", "1>1:0"), "2>3:12"
        )
        with self.assertRaises(UnknownObject):
            MonoidalServices.tensor_of(self.plus, "2", "2")


class MonoidalFunctorTests(SimpleTestCase):
    def setUp(self):
        self.plus = FinSetSkeleton(3).witness.monoidal
        self.identity = FinFunctorFactory.build_identity(self.plus.base)
        self.strict = MonoidalFunctorFactory.build_identity(self.plus, self.identity)

    def test_identity_with_identity_laxator_passes(self):
        report = MonoidalServices.check_monoidal_functor(
            self.strict, self.plus, self.plus
        )
        self.assertTrue(report.passed, report.violations)
        self.assertIn("braided", report.checked)
        self.assertIn("strict", report.checked)

    def test_swapped_laxator_component_fails(self):
        laxator = dict(self.strict.laxator)
        laxator[("1", "1")] = "2>2:10"
        swapped = replace(self.strict, laxator=laxator, strength="strong")
        report = MonoidalServices.check_monoidal_functor(swapped, self.plus, self.plus)
        self.assertFalse(report.passed)
        self.assertFalse(report.failed("strong"))

    def test_strict_claim_needs_identities(self):
        laxator = dict(self.strict.laxator)
        laxator[("1", "1")] = "2>2:10"
        report = MonoidalServices.check_monoidal_functor(
            replace(self.strict, laxator=laxator), self.plus, self.plus
        )
        self.assertTrue(report.failed("strict"))

    def test_shape_mismatch(self):
        other = FinSetSkeleton(1).witness.monoidal
        with self.assertRaises(ShapeMismatch):
            MonoidalServices.check_monoidal_functor(self.strict, other, other)

    def test_identity_transformation_is_monoidal(self):
        t = NatTransFactory.build_identity(self.identity)
        report = MonoidalServices.check_monoidal_nat_trans(
            t, self.strict, self.strict, self.plus, self.plus
        )
        self.assertTrue(report.passed, report.violations)

    def test_mutated_component_is_not_monoidal(self):
        t = NatTransFactory.build_identity(self.identity)
        t = replace(t, components={**t.components, "2": "2>2:10"})
        report = MonoidalServices.check_monoidal_nat_trans(
            t, self.strict, self.strict, self.plus, self.plus
        )
        self.assertFalse(report.passed)


class CocartesianTests(SimpleTestCase):
    def test_walking_arrow_has_joins(self):
        witness = CocartesianServices.find_cocartesian(
            FinCatFactory.build_walking_arrow(), require_total=True
        )
        self.assertIsNotNone(witness)
        self.assertEqual(witness.initial, "0")
        self.assertEqual(witness.plus("0", "1"), "1")
        self.assertEqual(witness.plus("1", "1"), "1")
        report = MonoidalServices.check_monoidal(witness.monoidal)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("hexagon", report.checked)

    def test_discrete_category_has_no_initial_object(self):
        discrete = FinCatFactory.build_discrete(["a", "b"])
        self.assertIsNone(CocartesianServices.find_cocartesian(discrete))

    def test_finset_search_matches_left_offset_sums(self):
        finset = FinSetSkeleton(3)
        found = CocartesianServices.find_cocartesian(finset.category)
        self.assertEqual(found.coprojections, finset.witness.coprojections)
        self.assertNotIn(("2", "2"), found.coprojections)
        self.assertIsNone(
            CocartesianServices.find_cocartesian(finset.category, require_total=True)
        )

    def test_witness_is_verified_by_enumeration(self):
        witness = FinSetSkeleton(3).witness
        self.assertTrue(CocartesianServices.check_witness(witness).passed)
        self.assertEqual(witness.mediate("1", "1", "1>1:0", "1>1:0"), "2>1:00")

    def test_symmetric_braiding_is_the_swap(self):
        monoidal = FinSetSkeleton(2).witness.monoidal
        self.assertEqual(monoidal.beta("1", "1"), "2>2:10")
        report = MonoidalServices.check_monoidal(monoidal)
        self.assertIn("symmetry", report.checked)
        self.assertTrue(report.passed, report.violations)

    def test_search_bound(self):
        with self.assertRaises(SizeLimitExceeded):
            CocartesianServices.find_cocartesian(
                FinSetSkeleton(3).category, max_objects=2
            )

    def test_witness_is_read_back_from_the_monoidal_tables(self):
        witness = FinSetSkeleton(3).witness
        again = CocartesianServices.witness_for(witness.monoidal)
        self.assertEqual(again.coprojections, witness.coprojections)
        self.assertEqual(again.monoidal.tensor.mor_map, witness.monoidal.tensor.mor_map)

    def test_witness_needs_an_initial_unit(self):
        z2 = MonoidalFactory.build_trivial(cyclic_group(2))
        with self.assertRaises(BaseNotCocartesian):
            CocartesianServices.witness_for(z2)
