import random
from dataclasses import replace
from itertools import count

from django.test import SimpleTestCase, tag
from hypothesis import given, settings
from hypothesis import strategies as st

from fibred.domain.fincat.models import FinCatFactory, FinFunctorFactory
from fibred.domain.moncat.models import MonoidalFactory
from utils.data_manipulation.type_conversion import pair
from utils.django.exceptions import MalformedTable, ShapeMismatch, UnknownObject

from .generators import (
    INDISCRETE,
    central_lax_monoidal,
    central_twist,
    flip_central,
    random_central_pseudo_indexed,
    random_pseudo_indexed,
    random_strict_indexed,
    slice_indexed,
    twist,
    union_lax_monoidal,
)
from .models import CONTRAVARIANT, COVARIANT, GrothMor, IndexedCatFactory
from .services import Indexed1CellServices, IndexedServices

randoms = st.randoms(use_true_random=False)


class IndexedCatTests(SimpleTestCase):
    def setUp(self):
        self.arrow = FinCatFactory.build_walking_arrow()

    def test_slices_of_the_walking_arrow(self):
        m = slice_indexed(self.arrow, COVARIANT)
        self.assertEqual(len(m.at("0").objects), 1)
        self.assertEqual(len(m.at("1").objects), 2)
        self.assertEqual(len(m.at("1").morphisms), 3)
        report = IndexedServices.check_pseudofunctor(m)
        self.assertTrue(report.passed, report.violations)
        self.assertIn("strict", report.checked)

    def test_coslices_are_contravariant(self):
        m = slice_indexed(self.arrow, CONTRAVARIANT)
        self.assertEqual(m.fun("0<=1").source, m.at("1"))
        self.assertTrue(IndexedServices.check_pseudofunctor(m).passed)

    def test_constant_indexed_category(self):
        m = IndexedCatFactory.build_constant(self.arrow, INDISCRETE, CONTRAVARIANT)
        self.assertTrue(IndexedServices.check_pseudofunctor(m).passed)

    def test_reindexer_between_the_wrong_fibres_is_reported(self):
        m = slice_indexed(self.arrow, COVARIANT)
        reindex = dict(m.reindex)
        reindex["0<=1"] = FinFunctorFactory.build_identity(m.at("1"))
        report = IndexedServices.check_pseudofunctor(replace(m, reindex=reindex))
        self.assertTrue(report.failed("reindex-typing"))

    def test_missing_compositor_raises(self):
        m = slice_indexed(self.arrow, COVARIANT)
        compositor = dict(m.compositor)
        compositor.pop(next(iter(compositor)))
        with self.assertRaises(MalformedTable):
            IndexedServices.check_pseudofunctor(replace(m, compositor=compositor))

    def test_grothendieck_calculus_on_a_slice(self):
        m = slice_indexed(self.arrow, COVARIANT)
        lift = m.g_lift("0<=1", "0<=0")
        self.assertEqual(lift.source, ("0", "0<=0"))
        self.assertEqual(lift.target, ("1", "0<=1"))
        one = m.g_id("1", "0<=1")
        self.assertEqual(m.g_comp(one, lift), lift)
        self.assertTrue(m.g_typed(lift))

    @settings(deadline=None, max_examples=15)
    @given(randoms)
    def test_generated_strict_data_passes(self, rng):
        m = random_strict_indexed(rng, max_objects=3, max_morphisms=6)
        report = IndexedServices.check_pseudofunctor(m)
        self.assertTrue(report.passed, report.violations)

    @tag("extended_slow")
    @settings(deadline=None, max_examples=100)
    @given(randoms)
    def test_twisted_data_is_pseudo_and_passes(self, rng):
        m = random_strict_indexed(rng, max_objects=3, max_morphisms=5)
        twisted, maps = twist(m, rng)
        self.assertFalse(twisted.strict)
        self.assertEqual(set(maps), set(m.base.mor_ids))
        report = IndexedServices.check_pseudofunctor(twisted)
        self.assertTrue(report.passed, report.violations)

    def test_unitor_with_the_wrong_ends_is_reported(self):
        m = slice_indexed(self.arrow, COVARIANT)
        unitor = dict(m.unitor)
        unitor["1"] = replace(unitor["1"], target_fun=m.fun("0<=1"))
        report = IndexedServices.check_pseudofunctor(replace(m, unitor=unitor))
        self.assertTrue(report.failed("unitor-typing"))

    @tag("extended_slow")
    @settings(deadline=None, max_examples=100)
    @given(randoms, st.booleans())
    def test_generated_pseudo_data_passes(self, rng, central):
        generate = random_central_pseudo_indexed if central else random_pseudo_indexed
        m = generate(rng, COVARIANT, max_objects=3, max_morphisms=5)
        report = IndexedServices.check_pseudofunctor(m)
        self.assertTrue(report.passed, report.violations)

    @settings(deadline=None, max_examples=20)
    @given(randoms)
    def test_central_twist_has_parallel_fibre_morphisms(self, rng):
        m = random_strict_indexed(rng, max_objects=3, max_morphisms=5)
        twisted, charge = central_twist(m, rng)
        self.assertEqual(set(charge), set(m.base.morphisms))
        self.assertFalse(twisted.strict)
        x = m.base.objects[0]
        a = m.at(x).objects[0]
        loops = twisted.at(x).hom(pair(a, "*"), pair(a, "*"))
        self.assertEqual(len(loops), 2 * len(m.at(x).hom(a, a)))
        report = IndexedServices.check_pseudofunctor(twisted)
        self.assertTrue(report.passed, report.violations)


class LaxMonoidalIndexedTests(SimpleTestCase):
    def test_union_family_passes(self):
        l, w = union_lax_monoidal(random.Random(3))
        report = IndexedServices.check_lax_monoidal(l)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(w.initial, "{}")

    @tag("extended_slow")
    @settings(deadline=None, max_examples=100)
    @given(randoms, st.booleans())
    def test_generated_union_families_pass(self, rng, twisted):
        l, _ = union_lax_monoidal(rng, n=2, twisted=twisted)
        report = IndexedServices.check_lax_monoidal(l)
        self.assertTrue(report.passed, report.violations)

    def test_missing_laxator_is_reported_as_outside_the_universe(self):
        l, _ = union_lax_monoidal(random.Random(0), n=2)
        with self.assertRaises(UnknownObject):
            l.laxator_at("missing", "missing")

    def test_base_structure_on_another_category_is_rejected(self):
        l, _ = union_lax_monoidal(random.Random(0), n=2)
        other = MonoidalFactory.build_trivial(FinCatFactory.build_terminal())
        with self.assertRaises(ShapeMismatch):
            IndexedServices.check_lax_monoidal(replace(l, base_monoidal=other))

    def test_wrong_unit_object_is_reported(self):
        l, _ = union_lax_monoidal(random.Random(0), n=2)
        report = IndexedServices.check_lax_monoidal(replace(l, unit_obj="nowhere"))
        self.assertTrue(report.failed("unit-typing"))

    def test_total_structure_morphisms_are_typed(self):
        l, w = union_lax_monoidal(random.Random(1), n=2)
        p = (w.initial, l.unit_obj)
        lam = l.g_lambda(p)
        self.assertIsInstance(lam, GrothMor)
        self.assertEqual(lam.target, p)
        self.assertTrue(l.carrier.g_typed(lam))


class Indexed1CellTests(SimpleTestCase):
    def setUp(self):
        self.m = slice_indexed(FinCatFactory.build_walking_arrow(), COVARIANT)

    def test_identity_1cell_passes(self):
        c = Indexed1CellServices.identity_1cell(self.m)
        report = Indexed1CellServices.check_indexed_1cell(c)
        self.assertTrue(report.passed, report.violations)

    def test_composite_of_identities_is_identity(self):
        c = Indexed1CellServices.identity_1cell(self.m)
        composite = Indexed1CellServices.compose_1cells(c, c)
        self.assertTrue(Indexed1CellServices.check_indexed_1cell(composite).passed)
        self.assertEqual(composite.components, c.components)

    def test_identity_2cell_passes(self):
        c = Indexed1CellServices.identity_1cell(self.m)
        two = Indexed1CellServices.identity_2cell(c)
        report = Indexed1CellServices.check_indexed_2cell(two)
        self.assertTrue(report.passed, report.violations)
        vertical = Indexed1CellServices.vertical_compose_2cells(two, two)
        self.assertTrue(Indexed1CellServices.check_indexed_2cell(vertical).passed)

    def test_inclusion_of_a_smaller_constant_family(self):
        base = FinCatFactory.build_walking_arrow()
        small = IndexedCatFactory.build_constant(
            base, FinCatFactory.build_discrete(["a"]), COVARIANT
        )
        large = IndexedCatFactory.build_constant(
            base, FinCatFactory.build_discrete(["a", "b"]), COVARIANT
        )
        c = Indexed1CellServices.inclusion_1cell(small, large)
        report = Indexed1CellServices.check_indexed_1cell(c)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(c.components["1"].obj("a"), "a")


def flipped_nat(t, key):
    components = dict(t.components)
    components[key] = flip_central(components[key])
    return replace(t, components=components)


def flipped_cells(table, outer, inner):
    cells = dict(table[outer])
    cells[inner] = flip_central(cells[inner])
    return {**table, outer: cells}


def violated(report):
    return {v.law.rsplit(".", 1)[-1] for v in report.violations}


def union_over_several_sets(seed):
    for s in count(seed):
        l, w = union_lax_monoidal(random.Random(s), n=2)
        if len(w.base.objects) > 1:
            return l


DELTA_LAWS = {"associativity", "left-unit", "right-unit", "naturality"}
GAMMA_LAWS = {"left-unit", "right-unit", "naturality"}
SQUARE_LAWS = {"pseudonaturality-unit", "pseudonaturality-composite", "naturality"}
OMEGA_LAWS = {"triangle", "pentagon", "associator-naturality"}
XI_LAWS = {"triangle", "left-unitor-naturality"}
ZETA_LAWS = {"triangle", "right-unitor-naturality"}
BRAID_LAWS = {"symmetry", "hexagon", "inverse-hexagon", "braiding-naturality"}


class CoherenceMutationTests(SimpleTestCase):
    """
    Each row moves one component of coherent data on M x × Z2 fibres to the other Z2
    part. The ends stay the same, so only the coherence laws can see the change.
    """

    def setUp(self):
        arrow = FinCatFactory.build_walking_arrow()
        self.m, _ = central_twist(slice_indexed(arrow, COVARIANT), random.Random(0))

    def assertCaught(self, rows, check):
        for label, mutant, laws in rows:
            with self.subTest(label):
                report = check(mutant)
                self.assertFalse(report.passed, label)
                self.assertTrue(violated(report) & laws, report.violations)

    def test_pseudofunctor_mutations(self):
        m = self.m
        self.assertTrue(IndexedServices.check_pseudofunctor(m).passed)
        rows = []
        for gf, delta in sorted(m.compositor.items()):
            for a in sorted(delta.components):
                compositor = {**m.compositor, gf: flipped_nat(delta, a)}
                rows.append(
                    (f"δ{gf} at {a}", replace(m, compositor=compositor), DELTA_LAWS)
                )
        for x, gamma in sorted(m.unitor.items()):
            for a in sorted(gamma.components):
                unitor = {**m.unitor, x: flipped_nat(gamma, a)}
                rows.append((f"γ{x} at {a}", replace(m, unitor=unitor), GAMMA_LAWS))
        self.assertEqual(len(rows), 8)
        self.assertCaught(rows, IndexedServices.check_pseudofunctor)

    def test_square_filler_mutations(self):
        c = Indexed1CellServices.identity_1cell(self.m)
        self.assertTrue(Indexed1CellServices.check_indexed_1cell(c).passed)
        rows = []
        for x in self.m.base.objects:
            one = self.m.base.id(x)
            square = c.squares[one]
            for a in sorted(square.components):
                squares = {**c.squares, one: flipped_nat(square, a)}
                rows.append(
                    (f"τ_{one} at {a}", replace(c, squares=squares), SQUARE_LAWS)
                )
        self.assertEqual(len(rows), 3)
        self.assertCaught(rows, Indexed1CellServices.check_indexed_1cell)

    @tag("extended_slow")
    def test_lax_monoidal_mutations(self):
        l = central_lax_monoidal(union_over_several_sets(5))
        self.assertTrue(IndexedServices.check_lax_monoidal(l).passed)
        unit, unit_obj = l.base_monoidal.unit, l.unit_obj
        rows = []
        omega = [
            (xyz, abc)
            for xyz in sorted(l.omega)
            if xyz[1] == unit
            for abc in sorted(l.omega[xyz])
            if abc[1] == unit_obj
        ]
        for xyz, abc in omega[:3]:
            table = flipped_cells(l.omega, xyz, abc)
            rows.append((f"ω{xyz} at {abc}", replace(l, omega=table), OMEGA_LAWS))
        for x in sorted(l.xi)[:2]:
            a = sorted(l.xi[x])[0]
            table = flipped_cells(l.xi, x, a)
            rows.append((f"ξ_{x} at {a}", replace(l, xi=table), XI_LAWS))
        for x in sorted(l.zeta)[:2]:
            a = sorted(l.zeta[x])[0]
            table = flipped_cells(l.zeta, x, a)
            rows.append((f"ζ_{x} at {a}", replace(l, zeta=table), ZETA_LAWS))
        for xy in [xy for xy in sorted(l.braid_cell) if xy[0] != xy[1]][:2]:
            ab = sorted(l.braid_cell[xy])[0]
            table = flipped_cells(l.braid_cell, xy, ab)
            rows.append((f"v{xy} at {ab}", replace(l, braid_cell=table), BRAID_LAWS))
        self.assertEqual(len(rows), 9)
        self.assertCaught(rows, IndexedServices.check_lax_monoidal)
