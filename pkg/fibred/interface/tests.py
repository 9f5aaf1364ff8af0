import json
import tempfile
from dataclasses import replace
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from fibred.domain.corr.models import FibrewiseMonoidal
from fibred.domain.fib.models import ClovenFibrationFactory
from fibred.domain.fincat.models import FinCatFactory, LawReport
from fibred.domain.indexed.generators import INDISCRETE, slice_indexed
from fibred.domain.indexed.models import COVARIANT, LaxMonoidalIndexed
from fibred.infrastructure.interchange.services import InterchangeServices
from utils.django.exceptions import EXIT_INPUT_ERROR, EXIT_LAW_FAILURE


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def write(self, name: str, entity) -> str:
        path = self.root / name
        InterchangeServices.dump_file(entity, path)
        return str(path)

    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err)
        return out.getvalue(), err.getvalue()

    def call_failing(self, *args):
        out, err = StringIO(), StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command(*args, stdout=out, stderr=err)
        return caught.exception.returncode, out.getvalue(), err.getvalue()


class LawcheckCommandTests(CommandTestCase):
    def test_terminal_category_passes(self):
        path = self.write("one.yaml", FinCatFactory.build_terminal())
        out, _ = self.call("lawcheck", path)
        self.assertTrue(out.startswith("PASS Check-Files Successful.\n"))

    def test_records_and_report_document(self):
        path = self.write("arrow.yaml", FinCatFactory.build_walking_arrow())
        target = self.root / "report.yaml"
        out, _ = self.call(
            "lawcheck", path, "--format", "records", "--output", str(target)
        )
        summary = json.loads(out.splitlines()[0])
        self.assertTrue(summary["success"])
        self.assertIn("2.associativity", summary["data"]["checked"])
        report = InterchangeServices.load_file(target)
        self.assertIsInstance(report, LawReport)
        self.assertTrue(report.passed)

    def test_saved_failure_keeps_failing(self):
        report = LawReport(subject="saved")
        report.fail("associativity", ("h", "g", "f"), "sides differ")
        code, out, _ = self.call_failing("lawcheck", self.write("saved.yaml", report))
        self.assertEqual(code, EXIT_LAW_FAILURE)
        self.assertIn("violated saved.associativity at (h, g, f)", out)

    def test_malformed_file_is_an_input_error(self):
        path = self.root / "bad.yaml"
        path.write_text("kind: fincat\nobjects: 7\n", encoding="utf-8")
        code, _, err = self.call_failing("lawcheck", str(path))
        self.assertEqual(code, EXIT_INPUT_ERROR)
        self.assertIn("schema-violation", err)

    def test_report_can_go_to_a_file(self):
        target = self.root / "report.txt"
        path = self.write("one.yaml", FinCatFactory.build_terminal())
        out, _ = self.call("lawcheck", path, "--report", str(target))
        self.assertEqual(out, "")
        self.assertTrue(target.read_text(encoding="utf-8").startswith("PASS"))


class GrothCommandTests(CommandTestCase):
    def test_projection_goes_to_stdout_and_report_to_stderr(self):
        m = slice_indexed(FinCatFactory.build_walking_arrow(), COVARIANT)
        out, err = self.call("groth", self.write("slices.yaml", m))
        p = InterchangeServices.loads(out)
        self.assertTrue(p.opfibration)
        self.assertEqual(len(p.total.objects), 3)
        self.assertTrue(err.startswith("PASS Build-Total Successful.\n"))

    def test_wrong_kind_is_an_input_error(self):
        path = self.write("arrow.yaml", FinCatFactory.build_walking_arrow())
        code, _, err = self.call_failing("groth", path)
        self.assertEqual(code, EXIT_INPUT_ERROR)
        self.assertIn("wrong-kind", err)

    def test_mutated_fibration_fails_its_round_trip(self):
        arrow = FinCatFactory.build_walking_arrow()
        p = ClovenFibrationFactory.build_projection(arrow, INDISCRETE)
        cleavage = dict(p.cleavage)
        del cleavage[("0<=1", "(1|0)")]
        path = self.write("p.yaml", replace(p, cleavage=cleavage, split=False))
        code, out, _ = self.call_failing("roundtrip", path)
        self.assertEqual(code, EXIT_LAW_FAILURE)
        self.assertTrue(out.startswith("FAIL"))

    def test_projection_round_trips(self):
        p = ClovenFibrationFactory.build_projection(
            FinCatFactory.build_walking_arrow(), INDISCRETE
        )
        out, _ = self.call("roundtrip", self.write("p.yaml", p))
        self.assertTrue(out.startswith("PASS Roundtrip Successful."))


class ZooCommandTests(CommandTestCase):
    def test_unknown_fixture_is_rejected_by_the_parser(self):
        with self.assertRaises(CommandError):
            self.call("zoo", "hypergraphs")

    def test_union_transfers_there_and_back(self):
        source = self.root / "union.yaml"
        target = self.root / "fibrewise.yaml"
        self.call("zoo", "union", "--seed", "3", "--output", str(source))
        self.call("transfer", "to-fibrewise", str(source), "--output", str(target))
        self.assertIsInstance(InterchangeServices.load_file(target), FibrewiseMonoidal)
        out, err = self.call("transfer", "to-global", str(target))
        self.assertIsInstance(InterchangeServices.loads(out), LaxMonoidalIndexed)
        self.assertTrue(err.startswith("PASS To-Global Successful."))

    def test_strictness_of_union_families(self):
        path = self.root / "union.yaml"
        self.call("zoo", "union", "--seed", "3", "--output", str(path))
        out, _ = self.call("transfer", "strictness", str(path))
        self.assertTrue(out.startswith("PASS Strictness Successful."))

    @tag("extended_slow")
    def test_two_vertex_graphs_have_nineteen_total_objects(self):
        graphs = self.root / "graphs.yaml"
        total = self.root / "total.yaml"
        self.call("zoo", "graphs", "--vertex-bound", "2", "--output", str(graphs))
        self.call("mongroth", str(graphs), "--output", str(total))
        data = InterchangeServices.load_file(total)
        self.assertEqual(len(data.carrier.total.objects), 19)
