import random
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from fibred.domain.fincat.models import FinCatFactory, FinFunctorFactory, LawReport
from fibred.domain.indexed.generators import union_lax_monoidal
from fibred.infrastructure.interchange.services import InterchangeServices
from utils.django.exceptions import ParseError, ShapeMismatch

from .services import CheckAppServices


class CheckAppServicesTests(SimpleTestCase):
    def setUp(self):
        self.services = CheckAppServices()
        self.arrow = FinCatFactory.build_walking_arrow()
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_each_kind_gets_its_checker(self):
        functor = FinFunctorFactory.build_identity(self.arrow)
        self.assertIn("composition", self.services.check_entity(functor).checked)
        self.assertIn("associativity", self.services.check_entity(self.arrow).checked)

    def test_lax_monoidal_data_is_checked_as_such(self):
        l, _ = union_lax_monoidal(random.Random(3))
        report = self.services.check_entity(l)
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(any("laxator" in law for law in report.checked))

    def test_stored_reports_are_returned_as_they_are(self):
        report = LawReport(subject="saved")
        report.fail("associativity", ("h", "g", "f"), "sides differ")
        self.assertIs(self.services.check_entity(report), report)

    def test_other_objects_are_refused(self):
        with self.assertRaises(ShapeMismatch):
            self.services.check_entity("not an entity")

    def test_files_are_checked_under_their_names(self):
        paths = []
        for entity in (self.arrow, FinCatFactory.build_terminal()):
            path = self.root / f"{entity.name}.yaml"
            InterchangeServices.dump_file(entity, path)
            paths.append(path)
        workspace, report = self.services.check_files(paths)
        self.assertEqual(set(workspace.entities), {"1", "2"})
        self.assertTrue(report.passed, report.violations)
        self.assertIn("2.associativity", report.checked)
        self.assertIn("1.associativity", report.checked)

    def test_unreadable_files_stop_the_check(self):
        with self.assertRaises(ParseError):
            self.services.check_files([self.root / "absent.yaml"])
