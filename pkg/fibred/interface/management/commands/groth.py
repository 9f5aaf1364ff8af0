from fibred.application.groth.services import GrothAppServices
from fibred.domain.indexed.models import IndexedCat
from fibred.infrastructure.custom_response.response_and_error import ReportResponse
from fibred.interface.management.base import FibredCommand, Outcome


class Command(FibredCommand):
    help = (
        "Builds the Grothendieck construction of an indexed category and writes its "
        "projection as a cloven (op)fibration."
    )

    def add_inputs(self, parser) -> None:
        parser.add_argument("file", help="An indexed category.")

    def run(self, file, **options) -> Outcome:
        return self.build_total(self.load(file, IndexedCat))

    def build_total(self, m: IndexedCat) -> Outcome:
        p, report = GrothAppServices().build_total(m)
        return p, report, ReportResponse(report, output_format=self.output_format)
