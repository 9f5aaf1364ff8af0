import random
from dataclasses import replace

from django.test import SimpleTestCase, override_settings, tag
from hypothesis import given, settings
from hypothesis import strategies as st

from fibred.domain.corr.services import CorrServices
from fibred.domain.fib.services import FibrationServices
from fibred.domain.fincat.models import FinCatFactory
from fibred.domain.fincat.services import FinCatServices
from fibred.domain.groth.services import GrothServices
from fibred.domain.indexed.services import Indexed1CellServices, IndexedServices
from fibred.domain.moncat.services import MonoidalServices
from utils.data_manipulation.type_conversion import pair, tuple_id
from utils.django.exceptions import SizeLimitExceeded, TypeMismatch

from .dynamics import DynamicsServices
from .generators import (
    feedback_wiring,
    random_box,
    random_machine,
    random_wired_machine,
    toggle_machine,
)
from .models import (
    INNER,
    MARKED_VERTEX,
    SIMPLE_GRAPH,
    Box,
    DecoratorFactory,
    FinSetSkeleton,
    WiringDiagramFactory,
    function_id,
)
from .services import NetworkModelServices, ZooServices

randoms = st.randoms(use_true_random=False)


class FinSetSkeletonTests(SimpleTestCase):
    def test_functions_are_counted(self):
        c = FinSetSkeleton(2).category
        self.assertEqual(c.objects, ("0", "1", "2"))
        self.assertEqual(len(c.morphisms), 1 + 1 + 1 + 0 + 1 + 2 + 0 + 1 + 4)

    def test_coproducts_stop_at_the_bound(self):
        w = FinSetSkeleton(2).witness
        self.assertEqual(w.plus("1", "1"), "2")
        self.assertEqual(w.iota("1", "1"), ("1>2:0", "1>2:1"))
        self.assertFalse(w.monoidal.defined("2", "1"))

    def test_bound_is_validated(self):
        with self.assertRaises(ValueError):
            FinSetSkeleton(12)


class GraphTests(SimpleTestCase):
    def setUp(self):
        self.l, self.w = ZooServices.graph_opindexed(2)

    def test_fibre_over_one_vertex(self):
        self.assertEqual(sorted(self.l.carrier.at("1").objects), ["{00}", "{}"])
        self.assertEqual(self.l.carrier.at("0").objects, ("{}",))

    def test_pushforward_merges_edges(self):
        self.assertEqual(self.l.carrier.act("2>1:00", "{01,10}"), "{00}")

    def test_laxator_places_graphs_side_by_side(self):
        self.assertEqual(self.l.mu("1", "1", "{}", "{00}"), "{11}")
        d = DecoratorFactory.build_entity(3, SIMPLE_GRAPH)
        self.assertEqual(d.phi(2, "{01}", "{00}"), "{01,22}")

    def test_graphs_are_lax_monoidal(self):
        report = IndexedServices.check_lax_monoidal(self.l)
        self.assertTrue(report.passed, report.violations)

    def test_vertex_projection_is_a_monoidal_opfibration(self):
        g, data = ZooServices.vertex_opfibration(2)
        self.assertEqual(len(g.total.objects), 1 + 2 + 16)
        self.assertEqual(data.total_monoidal.unit, pair("0", "{}"))
        self.assertEqual(
            data.total_monoidal.t(pair("1", "{00}"), pair("1", "{}")),
            pair("2", "{00}"),
        )
        report = FibrationServices.check_monoidal_fibration(data)
        self.assertTrue(report.passed, report.violations)

    def test_fibrewise_tensor_is_overlay(self):
        f = CorrServices.global_to_fibrewise(self.l, self.w)
        self.assertEqual(f.per_fibre["1"].tensor.obj("{00}", "{}"), "{00}")
        self.assertEqual(f.per_fibre["1"].unit, "{}")
        self.assertIn("2", f.skipped)

    def test_graph_fibres_are_strict(self):
        report = CorrServices.strictness_analysis(self.l, self.w)
        self.assertTrue(report.passed, report.violations)

    def test_total_is_cocartesian(self):
        crit = CorrServices.search_criterion(self.l, self.w)
        report = CorrServices.check_cocartesian_total(self.l, crit, self.w)
        self.assertTrue(report.passed, report.violations)

    def test_inclusion_of_smaller_universe(self):
        small, _ = ZooServices.graph_opindexed(1)
        c = ZooServices.graph_inclusion(small, self.l)
        report = Indexed1CellServices.check_indexed_1cell(c)
        self.assertTrue(report.passed, report.violations)

    def test_inclusion_transports_to_the_totals(self):
        small, _ = ZooServices.graph_opindexed(1)
        c = ZooServices.graph_inclusion(small, self.l)
        cell = GrothServices.groth_1cell(c)
        self.assertEqual(cell.top.obj(pair("1", "{00}")), pair("1", "{00}"))
        self.assertEqual(cell.bottom.obj("1"), "1")
        report = FibrationServices.check_fibred_1cell(cell)
        self.assertTrue(report.passed, report.violations)
        two = GrothServices.groth_2cell(Indexed1CellServices.identity_2cell(c))
        report = FibrationServices.check_fibred_2cell(two)
        self.assertTrue(report.passed, report.violations)

    def test_vertex_bound_is_limited(self):
        with self.assertRaises(SizeLimitExceeded):
            ZooServices.graph_opindexed(4)

    @override_settings(VERTEX_BOUND=1)
    def test_default_bound_comes_from_settings(self):
        l, _ = ZooServices.graph_opindexed()
        self.assertEqual(l.base.objects, ("0", "1"))


class SliceTests(SimpleTestCase):
    def setUp(self):
        arrow = FinCatFactory.build_walking_arrow()
        self.w = ZooServices.poset_witness(arrow)
        self.l = ZooServices.slice_opindexed(self.w)
        square = ZooServices.poset_witness(FinCatServices.product(arrow, arrow))
        self.fixtures = [
            ("arrow", self.l, self.w),
            ("square", ZooServices.slice_opindexed(square), square),
        ]

    def test_slices_of_the_walking_arrow(self):
        self.assertEqual(len(self.l.carrier.at("0").objects), 1)
        self.assertEqual(len(self.l.carrier.at("1").objects), 2)
        self.assertEqual(self.l.unit_obj, "0<=0")

    def test_slices_of_the_square(self):
        M = self.fixtures[1][1].carrier
        self.assertEqual(len(M.at(pair("0", "0")).objects), 1)
        self.assertEqual(len(M.at(pair("1", "1")).objects), 4)
        self.assertEqual(self.fixtures[1][1].unit_obj, pair("0<=0", "0<=0"))

    def test_slices_are_lax_monoidal(self):
        for label, l, _ in self.fixtures:
            with self.subTest(label):
                report = IndexedServices.check_lax_monoidal(l)
                self.assertTrue(report.passed, report.violations)

    def test_fibrewise_tensor_is_the_slice_coproduct(self):
        f = CorrServices.global_to_fibrewise(self.l, self.w)
        self.assertEqual(f.per_fibre["1"].tensor.obj("0<=1", "1<=1"), "1<=1")
        self.assertEqual(f.per_fibre["1"].unit, "0<=1")

    def test_fibrewise_structures_pass(self):
        for label, l, w in self.fixtures:
            with self.subTest(label):
                f = CorrServices.global_to_fibrewise(l, w)
                report = CorrServices.check_fibrewise(f)
                self.assertTrue(report.passed, report.violations)

    def test_slice_transfer_round_trip(self):
        for label, l, w in self.fixtures:
            with self.subTest(label):
                report = CorrServices.roundtrip_transfer(l, w)
                self.assertTrue(report.passed, report.violations)

    def test_slice_total_is_cocartesian(self):
        crit = CorrServices.search_criterion(self.l, self.w)
        report = CorrServices.check_cocartesian_total(self.l, crit, self.w)
        self.assertTrue(report.passed, report.violations)

    def test_poset_without_joins_is_refused(self):
        with self.assertRaises(SizeLimitExceeded):
            ZooServices.poset_witness(FinCatFactory.build_discrete(["a", "b"]))


class FamilyTests(SimpleTestCase):
    def setUp(self):
        self.c = ZooServices.poset_witness(FinCatFactory.build_walking_arrow()).monoidal
        self.l, self.w = ZooServices.family_fibration(self.c, 2)

    def test_fibres_are_powers(self):
        M = self.l.carrier
        self.assertEqual(len(M.at("0").objects), 1)
        self.assertEqual(len(M.at("1").objects), 2)
        self.assertEqual(len(M.at("2").objects), 4)

    def test_families_are_lax_monoidal(self):
        report = IndexedServices.check_lax_monoidal(self.l)
        self.assertTrue(report.passed, report.violations)

    def test_fibrewise_tensor_is_pointwise(self):
        f = CorrServices.global_to_fibrewise(self.l, self.w)
        one = f.per_fibre["1"]
        self.assertEqual(
            one.tensor.obj(tuple_id(["0"]), tuple_id(["1"])),
            tuple_id([self.c.t("0", "1")]),
        )
        self.assertEqual(one.unit, tuple_id([self.c.unit]))

    def test_fibre_size_is_limited(self):
        with self.assertRaises(SizeLimitExceeded):
            ZooServices.family_fibration(self.c, 9)


class NetworkModelTests(SimpleTestCase):
    def setUp(self):
        self.graphs = DecoratorFactory.build_entity(2, SIMPLE_GRAPH)

    def test_loops_form_a_two_element_monoid(self):
        nm = NetworkModelServices.decorator_to_network_model(self.graphs)
        one = nm.monoids["1"]
        self.assertEqual(set(one.elements), {"{}", "{00}"})
        self.assertEqual(one.unit, "{}")
        self.assertEqual(one.mul("{00}", "{}"), "{00}")
        self.assertEqual(nm.monoids["0"].elements, ("{}",))

    def test_constituent_monoids_are_commutative_and_idempotent(self):
        nm = NetworkModelServices.decorator_to_network_model(self.graphs)
        for mon in nm.monoids.values():
            for a in mon.elements:
                self.assertEqual(mon.mul(a, a), a)
        report = NetworkModelServices.check_network_model(nm)
        self.assertIn("commutative", report.checked)

    def test_overlay_is_edge_union(self):
        d = DecoratorFactory.build_entity(3, SIMPLE_GRAPH)
        nabla = function_id(6, 3, (0, 1, 2, 0, 1, 2))
        self.assertEqual(d.act(nabla, d.phi(3, "{02,10}", "{01,11}")), "{01,02,10,11}")

    def test_marked_vertices(self):
        d = DecoratorFactory.build_entity(3, MARKED_VERTEX)
        nm = NetworkModelServices.decorator_to_network_model(d)
        self.assertEqual(len(nm.monoids["3"].elements), 8)
        self.assertEqual(nm.monoids["2"].mul("{0}", "{1}"), "{0,1}")

    def test_different_decorators_give_different_models(self):
        graphs = NetworkModelServices.decorator_to_network_model(self.graphs)
        marks = NetworkModelServices.decorator_to_network_model(
            DecoratorFactory.build_entity(2, MARKED_VERTEX)
        )
        self.assertNotEqual(graphs.monoids["2"].product, marks.monoids["2"].product)

    def test_symmetric_action(self):
        nm = NetworkModelServices.decorator_to_network_model(self.graphs)
        report = NetworkModelServices.network_model_action(nm)
        self.assertTrue(report.passed, report.violations)

    def test_broken_monoid_is_reported(self):
        nm = NetworkModelServices.decorator_to_network_model(self.graphs)
        one = nm.monoids["1"]
        product = {**one.product, ("{00}", "{}"): "{}"}
        broken = replace(nm, monoids={**nm.monoids, "1": replace(one, product=product)})
        report = NetworkModelServices.check_network_model(broken)
        self.assertTrue(report.failed("unit"))
        self.assertTrue(report.failed("commutative"))


class DynamicsTests(SimpleTestCase):
    def test_identity_wiring_leaves_machines_alone(self):
        m = toggle_machine()
        image = DynamicsServices.dds_apply(DynamicsServices.identity_wiring(m.box), m)
        self.assertTrue(DynamicsServices.behaviorally_equivalent(image, m))

    def test_feedback_toggle_oscillates(self):
        m = toggle_machine()
        closed = DynamicsServices.dds_apply(feedback_wiring(m.box), m)
        self.assertEqual(closed.box, Box((), (2,)))
        stream = DynamicsServices.simulate(closed, 0, [()] * 7)
        self.assertEqual(stream, [(0,), (1,)] * 4)

    def test_mistyped_wiring_is_refused(self):
        with self.assertRaises(TypeMismatch):
            WiringDiagramFactory.build_entity(
                Box((2,), (3,)), Box((), (3,)), [(INNER, 0)], [0]
            )

    def test_machines_on_different_boxes_differ(self):
        m = toggle_machine()
        self.assertFalse(
            DynamicsServices.behaviorally_equivalent(m, DynamicsServices.unit_machine())
        )

    def test_identity_is_a_machine_morphism(self):
        m = toggle_machine()
        self.assertEqual(DynamicsServices.machine_morphisms(m, m), [(0, 1)])

    @tag("extended_slow")
    @settings(deadline=None, max_examples=200)
    @given(randoms)
    def test_wiring_action_is_functorial(self, rng):
        m, phi, psi = random_wired_machine(rng)
        together = DynamicsServices.dds_apply(
            DynamicsServices.compose_wiring(psi, phi), m
        )
        stepwise = DynamicsServices.dds_apply(psi, DynamicsServices.dds_apply(phi, m))
        self.assertTrue(DynamicsServices.behaviorally_equivalent(together, stepwise))

    @tag("extended_slow")
    @settings(deadline=None, max_examples=200)
    @given(randoms)
    def test_parallel_composition_is_lax(self, rng):
        m1, phi1, _ = random_wired_machine(rng, max_states=2, port_bound=1)
        m2, phi2, _ = random_wired_machine(rng, max_states=2, port_bound=1)
        placed = DynamicsServices.dds_apply(
            DynamicsServices.tensor_wiring(phi1, phi2),
            DynamicsServices.dds_parallel(m1, m2),
        )
        separate = DynamicsServices.dds_parallel(
            DynamicsServices.dds_apply(phi1, m1), DynamicsServices.dds_apply(phi2, m2)
        )
        self.assertTrue(DynamicsServices.behaviorally_equivalent(placed, separate))

    def test_unit_machine_is_a_parallel_unit(self):
        rng = random.Random(7)
        m = random_machine(rng, random_box(rng, 1))
        both = DynamicsServices.dds_parallel(DynamicsServices.unit_machine(), m)
        self.assertTrue(DynamicsServices.behaviorally_equivalent(both, m))

    def test_wiring_category_is_symmetric_monoidal(self):
        w, monoidal = DynamicsServices.wiring_category((2,), 1)
        self.assertEqual(len(w.objects), 4)
        report = MonoidalServices.check_monoidal(monoidal)
        self.assertTrue(report.passed, report.violations)

    def test_one_state_machines_tensor_to_one_state(self):
        l = DynamicsServices.dds_indexed(1, 1)
        x, y = Box().ident, Box((), (2,)).ident
        a = DynamicsServices.unit_machine().ident
        b = next(iter(l.carrier.at(y).objects))
        self.assertEqual(l.mu(x, y, a, b), b)

    @tag("extended_slow")
    def test_dds_total_is_a_monoidal_opfibration(self):
        g, data = DynamicsServices.dds_total_category(1, 1)
        report = FibrationServices.check_monoidal_fibration(data)
        self.assertTrue(report.passed, report.violations)
        fibres = {g.fibration.proj.obj(e) for e in g.total.objects}
        self.assertEqual(len(fibres), 4)
