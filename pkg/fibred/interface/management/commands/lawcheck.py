from fibred.application.check.services import CheckAppServices
from fibred.infrastructure.custom_response.response_and_error import ReportResponse
from fibred.interface.management.base import FibredCommand, Outcome


class Command(FibredCommand):
    help = "Checks the laws of every entity in the given interchange files."

    def add_inputs(self, parser) -> None:
        parser.add_argument("files", nargs="+", help="Interchange files.")

    def run(self, files, **options) -> Outcome:
        return self.check_files(files)

    def check_files(self, files) -> Outcome:
        _, report = CheckAppServices().check_files(files)
        return None, report, ReportResponse(report, output_format=self.output_format)
