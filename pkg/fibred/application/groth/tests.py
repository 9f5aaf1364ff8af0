import random
from dataclasses import replace

from django.test import SimpleTestCase

from fibred.domain.fib.models import ClovenFibrationFactory
from fibred.domain.fincat.models import FinCatFactory
from fibred.domain.indexed.generators import (
    INDISCRETE,
    slice_indexed,
    union_lax_monoidal,
)
from fibred.domain.indexed.models import CONTRAVARIANT, COVARIANT
from utils.django.exceptions import ShapeMismatch

from .services import GrothAppServices


class GrothAppServicesTests(SimpleTestCase):
    def setUp(self):
        self.services = GrothAppServices()
        self.arrow = FinCatFactory.build_walking_arrow()

    def test_slices_build_a_checked_total(self):
        p, report = self.services.build_total(slice_indexed(self.arrow, COVARIANT))
        self.assertTrue(p.opfibration)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("object-count", report.checked)
        self.assertIn("total: 3 objects over 2 base objects", report.notes)

    def test_contravariant_data_builds_a_fibration(self):
        m = slice_indexed(self.arrow, CONTRAVARIANT)
        p, report = self.services.build_total(m)
        self.assertFalse(p.opfibration)
        self.assertTrue(report.passed, report.violations)

    def test_monoidal_total_is_checked(self):
        l, _ = union_lax_monoidal(random.Random(5), n=2)
        data, report = self.services.build_monoidal_total(l)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(data.carrier.base, l.carrier.base)

    def test_projection_round_trips(self):
        p = ClovenFibrationFactory.build_projection(self.arrow, INDISCRETE)
        report = self.services.roundtrip(p)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("input.cleavage", report.checked)

    def test_broken_input_skips_the_round_trip(self):
        p = ClovenFibrationFactory.build_projection(self.arrow, INDISCRETE)
        cleavage = dict(p.cleavage)
        del cleavage[("0<=1", "(1|0)")]
        report = self.services.roundtrip(replace(p, cleavage=cleavage, split=False))
        self.assertTrue(report.failed("input.cleavage"))
        self.assertTrue(all(law.startswith("input.") for law in report.checked))

    def test_lax_monoidal_data_round_trips_through_the_transfer(self):
        l, _ = union_lax_monoidal(random.Random(3))
        report = self.services.roundtrip(l)
        self.assertTrue(report.passed, report.violations)

    def test_categories_cannot_round_trip(self):
        with self.assertRaises(ShapeMismatch):
            self.services.roundtrip(self.arrow)
