from fibred.application.groth.services import GrothAppServices
from fibred.infrastructure.custom_response.response_and_error import ReportResponse
from fibred.interface.management.base import FibredCommand, Outcome


class Command(FibredCommand):
    help = (
        "Checks that an indexed category, fibration, lax monoidal or fibrewise "
        "monoidal entity survives its construction and back up to isomorphism."
    )

    def add_inputs(self, parser) -> None:
        parser.add_argument("file", help="The entity to round-trip.")

    def run(self, file, **options) -> Outcome:
        return self.roundtrip(self.load(file))

    def roundtrip(self, subject) -> Outcome:
        report = GrothAppServices().roundtrip(subject)
        return None, report, ReportResponse(report, output_format=self.output_format)
