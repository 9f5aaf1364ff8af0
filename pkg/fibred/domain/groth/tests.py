import random
from dataclasses import replace

from django.test import SimpleTestCase, tag
from hypothesis import given, settings
from hypothesis import strategies as st

from fibred.domain.fib.models import ClovenFibrationFactory
from fibred.domain.fib.services import FibrationServices
from fibred.domain.fincat.models import FinCatFactory, FinFunctorFactory
from fibred.domain.fincat.services import FinCatServices
from fibred.domain.indexed.generators import (
    INDISCRETE,
    central_lax_monoidal,
    flip_central,
    random_central_pseudo_indexed,
    random_pseudo_indexed,
    random_strict_indexed,
    slice_indexed,
    twist,
    union_lax_monoidal,
)
from fibred.domain.indexed.models import (
    CONTRAVARIANT,
    COVARIANT,
    Indexed1CellFactory,
    IndexedCatFactory,
    MonoidalPart,
)
from fibred.domain.indexed.services import Indexed1CellServices
from fibred.domain.moncat.models import MonoidalFunctorFactory
from fibred.domain.moncat.services import MonoidalServices
from utils.django.exceptions import ShapeMismatch

from .services import GrothServices

randoms = st.randoms(use_true_random=False)


def identity_monoidal_1cell(l):
    """The identity indexed 1-cell on l with identity monoidal cells."""
    M, T = l.carrier, l.base_monoidal
    c = Indexed1CellFactory.build_identity(M)
    cells = {
        (x, y): {(a, b): M.at(xy).id(v) for (a, b), v in mu.obj_map.items()}
        for (x, y), mu in l.laxator.items()
        for xy in [T.t(x, y)]
    }
    base = FinFunctorFactory.build_identity(M.base)
    part = MonoidalPart(
        MonoidalFunctorFactory.build_identity(T, base),
        cells,
        M.at(T.unit).id(l.unit_obj),
    )
    return Indexed1CellFactory.build_entity(
        M, M, c.base_fun, c.components, c.squares, monoidal_part=part, name="1"
    )


class GrothendieckTests(SimpleTestCase):
    def setUp(self):
        self.arrow = FinCatFactory.build_walking_arrow()

    def test_slices_give_a_split_opfibration(self):
        m = slice_indexed(self.arrow, COVARIANT)
        g = GrothServices.grothendieck(m)
        self.assertEqual(len(g.total.objects), 3)
        self.assertTrue(g.fibration.opfibration)
        self.assertTrue(g.fibration.split)
        report = FibrationServices.check_fibration(g.fibration)
        self.assertTrue(report.passed, report.violations)

    def test_decode_inverts_identifiers(self):
        g = GrothServices.grothendieck(slice_indexed(self.arrow, CONTRAVARIANT))
        for k, h in g.morphisms.items():
            self.assertEqual(g.decode(k), h)
            self.assertEqual(g.mor_id(h), k)

    def test_constant_data_gives_the_product(self):
        m = IndexedCatFactory.build_constant(self.arrow, INDISCRETE, CONTRAVARIANT)
        g = GrothServices.grothendieck(m)
        product = FinCatServices.product(self.arrow, INDISCRETE)
        self.assertEqual(len(g.total.objects), len(product.objects))
        self.assertEqual(len(g.total.morphisms), len(product.morphisms))

    def test_projection_round_trip(self):
        p = ClovenFibrationFactory.build_projection(self.arrow, INDISCRETE)
        m = GrothServices.fibration_to_indexed(p)
        self.assertEqual(len(m.at("0").objects), 2)
        report = GrothServices.roundtrip_check(p)
        self.assertTrue(report.passed, report.violations)

    def test_roundtrip_rejects_other_subjects(self):
        with self.assertRaises(ShapeMismatch):
            GrothServices.roundtrip_check(self.arrow)

    @tag("extended_slow")
    @settings(deadline=None, max_examples=200)
    @given(randoms)
    def test_strict_indexed_round_trip(self, rng):
        m = random_strict_indexed(rng, max_objects=3, max_morphisms=6)
        report = GrothServices.roundtrip_check(m)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("strict-decoding", report.checked)

    def test_strict_round_trip_decodes_identity_cells(self):
        m = slice_indexed(self.arrow, CONTRAVARIANT)
        report = GrothServices.roundtrip_check(m)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("strict-decoding", report.checked)
        n = GrothServices.fibration_to_indexed(GrothServices.grothendieck(m).fibration)
        for x, gamma in n.unitor.items():
            self.assertTrue(all(map(n.at(x).is_identity, gamma.components.values())))

    def test_pseudo_round_trip_skips_strict_decoding(self):
        m, _ = twist(slice_indexed(self.arrow, COVARIANT), random.Random(2))
        report = GrothServices.roundtrip_check(m)
        self.assertTrue(report.passed, report.violations)
        self.assertNotIn("strict-decoding", report.checked)

    @tag("extended_slow")
    @settings(deadline=None, max_examples=100)
    @given(
        randoms,
        st.sampled_from([COVARIANT, CONTRAVARIANT]),
        st.sampled_from([random_pseudo_indexed, random_central_pseudo_indexed]),
    )
    def test_pseudo_indexed_round_trip(self, rng, variance, generate):
        m = generate(rng, variance, max_objects=3, max_morphisms=5)
        report = GrothServices.roundtrip_check(m)
        self.assertTrue(report.passed, report.violations)


class GrothCellTests(SimpleTestCase):
    def setUp(self):
        self.m = slice_indexed(FinCatFactory.build_walking_arrow(), COVARIANT)

    def test_identity_1cell_transports_to_an_identity(self):
        c = Indexed1CellServices.identity_1cell(self.m)
        cell = GrothServices.groth_1cell(c)
        g = GrothServices.grothendieck(self.m)
        self.assertEqual(cell.top.obj_map, {e: e for e in g.total.objects})
        self.assertTrue(FibrationServices.check_fibred_1cell(cell).passed)

    def test_identity_2cell_transports(self):
        c = Indexed1CellServices.identity_1cell(self.m)
        cell = GrothServices.groth_2cell(Indexed1CellServices.identity_2cell(c))
        report = FibrationServices.check_fibred_2cell(cell)
        self.assertTrue(report.passed, report.violations)


class MonoidalGrothendieckTests(SimpleTestCase):
    def setUp(self):
        self.l, self.w = union_lax_monoidal(random.Random(5), n=2)

    def test_total_is_a_monoidal_opfibration(self):
        data = GrothServices.monoidal_grothendieck(self.l)
        report = FibrationServices.check_monoidal_fibration(data)
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(MonoidalServices.check_monoidal(data.total_monoidal).passed)

    def test_braiding_extends_to_the_total(self):
        g, data = GrothServices.monoidal_total(self.l)
        braiding = GrothServices.braided_symmetric_extension(self.l, g)
        self.assertEqual(set(braiding), set(data.total_monoidal.tensor.obj_map))

    def test_identity_monoidal_1cell(self):
        c = identity_monoidal_1cell(self.l)
        report = GrothServices.check_monoidal_groth_1cell(c, self.l, self.l)
        self.assertTrue(report.passed, report.violations)

    def test_plain_1cell_has_no_monoidal_part(self):
        c = Indexed1CellServices.identity_1cell(self.l.carrier)
        with self.assertRaises(ShapeMismatch):
            GrothServices.monoidal_groth_1cell(c, self.l, self.l)

    def test_identity_monoidal_2cell(self):
        c = identity_monoidal_1cell(self.l)
        two = Indexed1CellServices.identity_2cell(c)
        report = GrothServices.check_monoidal_groth_2cell(two, self.l, self.l)
        self.assertTrue(report.passed, report.violations)

    @tag("extended_slow")
    def test_central_extension_of_the_identity_monoidal_1cell(self):
        l = central_lax_monoidal(self.l)
        c = identity_monoidal_1cell(l)
        report = GrothServices.check_monoidal_groth_1cell(c, l, l)
        self.assertTrue(report.passed, report.violations)

        unit_cell = flip_central(c.monoidal_part.unit_cell)
        part = replace(c.monoidal_part, unit_cell=unit_cell)
        report = GrothServices.check_monoidal_groth_1cell(
            replace(c, monoidal_part=part), l, l
        )
        self.assertFalse(report.passed)
        laws = {v.law.rsplit(".", 1)[-1] for v in report.violations}
        self.assertTrue(laws & {"left-unitality", "right-unitality"}, laws)
