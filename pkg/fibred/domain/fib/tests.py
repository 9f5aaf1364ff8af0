from dataclasses import replace

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from fibred.domain.fincat.generators import cyclic_group
from fibred.domain.fincat.models import (
    FinCatFactory,
    FinFunctorFactory,
    NatTransFactory,
)
from fibred.domain.indexed.generators import INDISCRETE, random_split_fibration
from utils.data_manipulation.type_conversion import pair, unpair
from utils.django.exceptions import MissingLift, ShapeMismatch

from .models import FIBRATION, OPFIBRATION, ClovenFibrationFactory, FibredCellFactory
from .services import FibrationServices


class ClovenFibrationTests(SimpleTestCase):
    def setUp(self):
        self.arrow = FinCatFactory.build_walking_arrow()
        self.projection = ClovenFibrationFactory.build_projection(
            self.arrow, INDISCRETE
        )

    def test_projection_is_a_split_fibration(self):
        report = FibrationServices.check_fibration(self.projection)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("split-composition", report.checked)
        self.assertTrue(FibrationServices.is_split(self.projection))

    def test_projection_is_also_an_opfibration(self):
        p = ClovenFibrationFactory.build_projection(self.arrow, INDISCRETE, OPFIBRATION)
        self.assertTrue(p.opfibration)
        self.assertTrue(FibrationServices.check_fibration(p).passed)

    def test_missing_lift_is_reported(self):
        cleavage = dict(self.projection.cleavage)
        key = ("0<=1", "(1|0)")
        self.assertIn(key, cleavage)
        del cleavage[key]
        p = replace(self.projection, cleavage=cleavage, split=False)
        report = FibrationServices.check_fibration(p)
        self.assertTrue(report.failed("cleavage"))
        self.assertEqual(report.first("cleavage").witness, key)
        with self.assertRaises(MissingLift):
            p.lift(*key)

    def test_cleavage_is_synthesized(self):
        p = FibrationServices.synthesize_cleavage(
            replace(self.projection, cleavage={}, split=False)
        )
        self.assertEqual(set(p.cleavage), set(self.projection.lift_keys()))
        self.assertTrue(FibrationServices.check_fibration(p).passed)

    def test_discrete_inclusion_is_not_a_fibration(self):
        total = FinCatFactory.build_discrete(["0", "1"])
        proj = FinFunctorFactory.build_entity(
            total,
            self.arrow,
            {"0": "0", "1": "1"},
            {"1_0": "0<=0", "1_1": "1<=1"},
        )
        p = FibrationServices.synthesize_cleavage(
            ClovenFibrationFactory.build_entity(total, self.arrow, proj, {}, FIBRATION)
        )
        report = FibrationServices.check_fibration(p)
        self.assertTrue(report.failed("cleavage"))
        self.assertEqual(report.first("cleavage").witness, ("0<=1", "1"))

    def test_cartesian_morphisms_of_a_product_have_invertible_fibre_part(self):
        p = ClovenFibrationFactory.build_projection(self.arrow, self.arrow)
        self.assertTrue(FibrationServices.is_cartesian(p, "(0<=1|0<=0)"))
        self.assertFalse(FibrationServices.is_cartesian(p, "(0<=1|0<=1)"))
        self.assertIsNotNone(FibrationServices.cartesian_witness(p, "(0<=1|0<=1)"))

    def test_fibre_and_reindexing(self):
        fibre = FibrationServices.fibre(self.projection, "0")
        self.assertEqual(len(fibre.objects), 2)
        self.assertEqual(len(fibre.morphisms), 4)
        pullback = FibrationServices.reindex(self.projection, "0<=1")
        self.assertEqual(pullback.source, FibrationServices.fibre(self.projection, "1"))
        self.assertEqual(pullback.obj("(1|0)"), "(0|0)")

    def test_identity_fibred_1cell(self):
        p = self.projection
        cell = FibredCellFactory.build_1cell(
            p,
            p,
            FinFunctorFactory.build_identity(p.total),
            FinFunctorFactory.build_identity(p.base),
        )
        report = FibrationServices.check_fibred_1cell(cell)
        self.assertTrue(report.passed, report.violations)

    def test_fibred_1cell_between_the_wrong_categories(self):
        p = self.projection
        cell = FibredCellFactory.build_1cell(
            p,
            p,
            FinFunctorFactory.build_identity(p.base),
            FinFunctorFactory.build_identity(p.base),
        )
        with self.assertRaises(ShapeMismatch):
            FibrationServices.check_fibred_1cell(cell)

    @settings(deadline=None, max_examples=10)
    @given(st.randoms(use_true_random=False))
    def test_generated_split_fibrations_pass(self, rng):
        p = random_split_fibration(rng, max_objects=3, max_morphisms=6)
        report = FibrationServices.check_fibration(p)
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(FibrationServices.is_split(p))


class FibredMutationTests(SimpleTestCase):
    def test_vertical_isos_in_identity_lifts_break_splitness(self):
        p = ClovenFibrationFactory.build_projection(
            FinCatFactory.build_walking_arrow(), INDISCRETE
        )
        rows = []
        for x in p.base.objects:
            one = p.base.id(x)
            for i in INDISCRETE.objects:
                j = "1" if i == "0" else "0"
                key = (one, pair(x, i))
                # the lift composed with the vertical iso (x, j) -> (x, i)
                cleavage = {**p.cleavage, key: pair(one, f"{j}>{i}")}
                rows.append((key, replace(p, cleavage=cleavage)))
        self.assertEqual(len(rows), 4)
        for key, mutant in rows:
            with self.subTest(key=key):
                report = FibrationServices.check_fibration(mutant)
                self.assertFalse(report.failed("cartesian"), report.violations)
                self.assertTrue(report.failed("split-identity"))
                self.assertFalse(FibrationServices.is_split(mutant))

    def test_top_cell_not_above_the_bottom_cell(self):
        p = ClovenFibrationFactory.build_projection(cyclic_group(2), INDISCRETE)
        one = FibredCellFactory.build_1cell(
            p,
            p,
            FinFunctorFactory.build_identity(p.total),
            FinFunctorFactory.build_identity(p.base),
        )
        top = NatTransFactory.build_identity(one.top)
        bottom = NatTransFactory.build_identity(one.bottom)
        turned_top = replace(
            top,
            components={
                e: pair("r1", f"{i}>{i}")
                for e in p.total.objects
                for i in unpair(e)[1:]
            },
        )
        turned_bottom = replace(bottom, components={"*": "r1"})
        rows = [
            ("identity", top, bottom, True),
            ("turned top", turned_top, bottom, False),
            ("turned bottom", top, turned_bottom, False),
        ]
        for label, beta, alpha, above in rows:
            with self.subTest(label):
                cell = FibredCellFactory.build_2cell(one, one, beta, alpha)
                report = FibrationServices.check_fibred_2cell(cell)
                self.assertFalse(report.failed("top.naturality"))
                self.assertFalse(report.failed("bottom.naturality"))
                self.assertEqual(report.passed, above, report.violations)
                self.assertEqual(report.failed("above"), not above)