from fibred.application.groth.services import GrothAppServices
from fibred.domain.indexed.models import LaxMonoidalIndexed
from fibred.infrastructure.custom_response.response_and_error import ReportResponse
from fibred.interface.management.base import FibredCommand, Outcome


class Command(FibredCommand):
    help = (
        "Builds the monoidal Grothendieck construction of a lax monoidal indexed "
        "category and writes the monoidal (op)fibration."
    )

    def add_inputs(self, parser) -> None:
        parser.add_argument("file", help="A lax monoidal indexed category.")

    def run(self, file, **options) -> Outcome:
        return self.build_monoidal_total(self.load(file, LaxMonoidalIndexed))

    def build_monoidal_total(self, l: LaxMonoidalIndexed) -> Outcome:
        data, report = GrothAppServices().build_monoidal_total(l)
        return data, report, ReportResponse(report, output_format=self.output_format)
