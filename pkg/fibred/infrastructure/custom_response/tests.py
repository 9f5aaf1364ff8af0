import json

from django.test import SimpleTestCase

from fibred.domain.fincat.models import FinCatFactory, LawReport
from fibred.domain.fincat.services import FinCatServices
from utils.django.exceptions import ParseError

from .response_and_error import RECORDS, ReportResponse


def check_arrow(output_format: str) -> str:
    report = FinCatServices.check_category(FinCatFactory.build_walking_arrow())
    return ReportResponse(report, output_format=output_format)


def failed_report() -> LawReport:
    report = LawReport(subject="mutated")
    report.law("identity")
    report.fail("associativity", ("h", "g", "f"), "sides differ")
    report.skipped["naturality"] = 2
    return report.finish()


class ReportResponseTests(SimpleTestCase):
    def test_passed_report_is_named_after_its_caller(self):
        text = check_arrow("text")
        self.assertTrue(text.startswith("PASS Check-Arrow Successful.\n"))
        self.assertIn("  checked: ", text)

    def test_failed_report_lists_its_witnesses(self):
        text = ReportResponse(failed_report())
        lines = text.splitlines()
        self.assertEqual(lines[0], "FAIL 1 law violation(s) in mutated.")
        self.assertIn("  violated associativity at (h, g, f): sides differ", lines)
        note = "  note: naturality: 2 instances outside the universe skipped"
        self.assertIn(note, lines)

    def test_records_put_the_summary_first(self):
        lines = ReportResponse(failed_report(), output_format=RECORDS).splitlines()
        summary = json.loads(lines[0])
        self.assertFalse(summary["success"])
        self.assertEqual(summary["data"]["skipped"], {"naturality": 2})
        self.assertEqual(
            json.loads(lines[1]),
            {
                "law": "associativity",
                "message": "sides differ",
                "witness": ["h", "g", "f"],
            },
        )

    def test_passed_records_are_one_line(self):
        lines = check_arrow(RECORDS).splitlines()
        self.assertEqual(len(lines), 1)
        self.assertTrue(json.loads(lines[0])["success"])
        self.assertEqual(json.loads(lines[0])["message"], "Check-Arrow Successful.")

    def test_skipped_instances_mark_partial_processing(self):
        report = LawReport(subject="partial", skipped={"naturality": 1})
        summary = json.loads(ReportResponse(report, output_format=RECORDS))
        self.assertTrue(summary["success"])
        self.assertTrue(summary["is_partially_processed"])

    def test_input_errors_show_line_and_field(self):
        error = ParseError("schema-violation", "7 is not of type 'array'", 6, "compose")
        text = ReportResponse(errors=error)
        self.assertEqual(
            text.splitlines(),
            [
                "FAIL 7 is not of type 'array'",
                "  schema-violation: 7 is not of type 'array' [line 6, field compose]",
            ],
        )

    def test_unexpected_errors_are_named_by_type(self):
        records = ReportResponse(errors=KeyError("x"), output_format=RECORDS)
        error = json.loads(records.splitlines()[1])
        self.assertEqual(error["item"], "KeyError")

    def test_explicit_message_wins(self):
        text = ReportResponse(LawReport(subject="s"), message="Built.")
        self.assertEqual(text.splitlines()[0], "PASS Built.")
