from fibred.application.zoo.services import FIXTURES, ZooAppServices
from fibred.infrastructure.custom_response.response_and_error import ReportResponse
from fibred.interface.management.base import FibredCommand, Outcome


class Command(FibredCommand):
    help = "Writes one of the worked examples as a lax monoidal indexed category."

    def add_inputs(self, parser) -> None:
        parser.add_argument("fixture", choices=FIXTURES)

    def run(self, fixture, **options) -> Outcome:
        return self.build_fixture(fixture)

    def build_fixture(self, fixture: str) -> Outcome:
        l, report = ZooAppServices().build_fixture(fixture)
        return l, report, ReportResponse(report, output_format=self.output_format)
