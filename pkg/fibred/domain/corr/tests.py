import random
from dataclasses import replace

from django.test import SimpleTestCase, tag
from hypothesis import given, settings
from hypothesis import strategies as st

from fibred.domain.fincat.models import FinCatFactory
from fibred.domain.indexed.generators import union_lax_monoidal
from fibred.domain.indexed.models import CONTRAVARIANT
from fibred.domain.indexed.services import IndexedServices
from fibred.domain.moncat.services import CocartesianServices
from utils.django.exceptions import BaseNotCocartesian, ShapeMismatch

from .models import CocartTotalCriterion
from .services import CorrServices


def mutated_laxator(l):
    """l with one value of one μ_{x,y} moved to another object of its fibre."""
    for key, mu in sorted(l.laxator.items()):
        for pair_, v in sorted(mu.obj_map.items()):
            others = [a for a in mu.target.objects if a != v]
            if others:
                obj_map = {**mu.obj_map, pair_: others[0]}
                laxator = {**l.laxator, key: replace(mu, obj_map=obj_map)}
                return replace(l, laxator=laxator)
    return None


class GlobalToFibrewiseTests(SimpleTestCase):
    def setUp(self):
        self.l, self.w = union_lax_monoidal(random.Random(3))

    def test_fibre_tensor_is_the_folded_laxator(self):
        f = CorrServices.global_to_fibrewise(self.l, self.w)
        M = self.l.carrier
        self.assertEqual(f.skipped, ())
        for x, data in f.per_fibre.items():
            for (a, b), ab in data.tensor.obj_map.items():
                self.assertEqual(ab, M.act(self.w.nabla(x), self.l.mu(x, x, a, b)))

    def test_fibrewise_structure_passes(self):
        f = CorrServices.global_to_fibrewise(self.l, self.w)
        report = CorrServices.check_fibrewise(f)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(set(f.reindex_monoidal), set(self.l.carrier.base.mor_ids))

    def test_fibre_unit_is_the_empty_set(self):
        f = CorrServices.global_to_fibrewise(self.l, self.w)
        self.assertTrue(all(d.unit == "{}" for d in f.per_fibre.values()))

    def test_other_base_is_refused(self):
        other = CocartesianServices.find_cocartesian(FinCatFactory.build_terminal())
        with self.assertRaises(BaseNotCocartesian):
            CorrServices.global_to_fibrewise(self.l, other)

    def test_contravariant_data_is_refused(self):
        carrier = replace(self.l.carrier, variance=CONTRAVARIANT)
        with self.assertRaises(ShapeMismatch):
            CorrServices.global_to_fibrewise(replace(self.l, carrier=carrier), self.w)


class FibrewiseToGlobalTests(SimpleTestCase):
    def setUp(self):
        self.l, self.w = union_lax_monoidal(random.Random(3))
        self.f = CorrServices.global_to_fibrewise(self.l, self.w)

    def test_rebuilt_data_is_lax_monoidal(self):
        back = CorrServices.fibrewise_to_global(self.f, self.w)
        self.assertEqual(back.unit_obj, "{}")
        report = IndexedServices.check_lax_monoidal(back)
        self.assertTrue(report.passed, report.violations)

    def test_missing_initial_fibre_is_refused(self):
        per_fibre = dict(self.f.per_fibre)
        del per_fibre[self.w.initial]
        with self.assertRaises(BaseNotCocartesian):
            CorrServices.fibrewise_to_global(
                replace(self.f, per_fibre=per_fibre), self.w
            )


class RoundtripTransferTests(SimpleTestCase):
    def setUp(self):
        self.l, self.w = union_lax_monoidal(random.Random(3))

    def test_global_round_trip(self):
        report = CorrServices.roundtrip_transfer(self.l, self.w, check_input=True)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("strict-laxator", report.checked)

    def test_fibrewise_round_trip(self):
        f = CorrServices.global_to_fibrewise(self.l, self.w)
        report = CorrServices.roundtrip_transfer(f, self.w, check_input=True)
        self.assertTrue(report.passed, report.violations)

    def test_mutated_laxator_fails(self):
        mutated = mutated_laxator(self.l)
        self.assertIsNotNone(mutated)
        report = CorrServices.roundtrip_transfer(mutated, self.w, check_input=True)
        self.assertFalse(report.passed)

    def test_other_subjects_are_refused(self):
        with self.assertRaises(ShapeMismatch):
            CorrServices.roundtrip_transfer(self.w, self.w)

    @tag("extended_slow")
    @settings(deadline=None, max_examples=50)
    @given(st.randoms(use_true_random=False))
    def test_generated_union_families_round_trip(self, rng):
        l, w = union_lax_monoidal(rng, n=2)
        self.assertTrue(CorrServices.roundtrip_transfer(l, w).passed)


class CocartesianTotalTests(SimpleTestCase):
    def setUp(self):
        self.l, self.w = union_lax_monoidal(random.Random(3))

    def test_union_fibres_are_strict(self):
        report = CorrServices.strictness_analysis(self.l, self.w)
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(any("strict monoidal" in n for n in report.notes))

    @tag("extended_slow")
    @settings(deadline=None, max_examples=50)
    @given(st.randoms(use_true_random=False))
    def test_generated_union_fibres_are_strict(self, rng):
        l, w = union_lax_monoidal(rng, n=2)
        report = CorrServices.strictness_analysis(l, w)
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(any("strict monoidal" in n for n in report.notes))

    def test_criterion_is_found_and_makes_the_total_cocartesian(self):
        crit = CorrServices.search_criterion(self.l, self.w)
        M = self.l.carrier
        for x in M.base.objects:
            self.assertEqual(set(crit.kappa[x]), set(M.at(x).objects))
        report = CorrServices.check_cocartesian_total(self.l, crit, self.w)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("total-coproduct", report.checked)
        self.assertIn("total-initial", report.checked)

    def test_empty_criterion_fails(self):
        crit = CocartTotalCriterion({}, {})
        report = CorrServices.check_cocartesian_total(self.l, crit, self.w)
        self.assertTrue(report.failed("criterion-missing"))
        self.assertNotIn("total-coproduct", report.checked)
