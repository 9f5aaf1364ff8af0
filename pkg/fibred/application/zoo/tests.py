from django.test import SimpleTestCase, override_settings, tag

from utils.django.exceptions import UnknownObject

from .services import (
    DDS,
    FAMILIES,
    GRAPHS,
    MARKED,
    SLICES,
    SQUARE_SLICES,
    TWISTED_UNION,
    UNION,
    ZooAppServices,
    square_poset,
)


class ZooAppServicesTests(SimpleTestCase):
    def setUp(self):
        self.services = ZooAppServices()

    def test_graphs_cover_the_network_model(self):
        l, report = self.services.build_fixture(GRAPHS, vertex_bound=1)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(l.carrier.base.objects, ("0", "1"))
        self.assertTrue(any(law.startswith("network-model.") for law in report.checked))
        self.assertTrue(any(law.startswith("action.") for law in report.checked))

    @override_settings(VERTEX_BOUND=1)
    def test_marked_vertices_use_the_configured_bound(self):
        l, report = self.services.build_fixture(MARKED)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(len(l.carrier.base.objects), 2)

    def test_slices(self):
        for fixture in (SLICES, SQUARE_SLICES):
            with self.subTest(fixture=fixture):
                _, report = self.services.build_fixture(fixture)
                self.assertTrue(report.passed, report.violations)

    def test_square_poset_has_joins(self):
        c = square_poset()
        self.assertEqual(len(c.objects), 4)
        self.assertEqual(len(c.morphisms), 9)

    def test_families(self):
        _, report = self.services.build_fixture(FAMILIES, set_bound=2)
        self.assertTrue(report.passed, report.violations)

    @tag("extended_slow")
    def test_machines(self):
        _, report = self.services.build_fixture(DDS, state_bound=1, port_bound=1)
        self.assertTrue(report.passed, report.violations)

    def test_union_families_follow_the_seed(self):
        first, report = self.services.build_fixture(UNION, seed=7)
        self.assertTrue(report.passed, report.violations)
        again, _ = self.services.build_fixture(UNION, seed=7)
        self.assertEqual(first, again)

    def test_twisted_union_families_are_lax_monoidal(self):
        _, report = self.services.build_fixture(TWISTED_UNION, seed=1)
        self.assertTrue(report.passed, report.violations)

    def test_unknown_fixture_is_refused(self):
        with self.assertRaises(UnknownObject):
            self.services.build_fixture("hypergraphs")
