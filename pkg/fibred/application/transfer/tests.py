import random
from dataclasses import replace

from django.test import SimpleTestCase

from fibred.domain.fincat.generators import cyclic_group
from fibred.domain.indexed.generators import union_lax_monoidal
from fibred.domain.moncat.models import MonoidalFactory
from utils.django.exceptions import BaseNotCocartesian, ShapeMismatch

from .services import TransferAppServices


class TransferAppServicesTests(SimpleTestCase):
    def setUp(self):
        self.services = TransferAppServices()
        self.l, self.w = union_lax_monoidal(random.Random(3))

    def test_witness_agrees_with_the_recorded_tensor(self):
        w = self.services.witness(self.l)
        self.assertEqual(w.initial, self.w.initial)
        self.assertEqual(w.monoidal.tensor.obj_map, self.w.monoidal.tensor.obj_map)

    def test_there_and_back(self):
        f, report = self.services.to_fibrewise(self.l)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(f.base_monoidal, self.l.base_monoidal)
        l, report = self.services.to_global(f)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(set(l.laxator), set(self.l.laxator))

    def test_fibrewise_data_without_a_base_structure_searches_for_one(self):
        f, _ = self.services.to_fibrewise(self.l)
        _, report = self.services.to_global(replace(f, base_monoidal=None))
        self.assertTrue(report.passed, report.violations)

    def test_round_trip(self):
        report = self.services.roundtrip(self.l)
        self.assertTrue(report.passed, report.violations)

    def test_criterion_and_strictness(self):
        self.assertTrue(self.services.cocartesian_total(self.l).passed)
        self.assertTrue(self.services.strictness(self.l).passed)

    def test_base_without_initial_unit_is_refused(self):
        trivial = MonoidalFactory.build_trivial(cyclic_group(2))
        with self.assertRaises(BaseNotCocartesian):
            self.services.to_fibrewise(replace(self.l, base_monoidal=trivial))

    def test_other_subjects_are_refused(self):
        with self.assertRaises(ShapeMismatch):
            self.services.witness(self.w)
