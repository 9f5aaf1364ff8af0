from fibred.application.transfer.services import (
    CRITERION,
    DIRECTIONS,
    STRICTNESS,
    TO_FIBREWISE,
    TransferAppServices,
)
from fibred.domain.corr.models import FibrewiseMonoidal
from fibred.domain.indexed.models import LaxMonoidalIndexed
from fibred.infrastructure.custom_response.response_and_error import ReportResponse
from fibred.interface.management.base import FibredCommand, Outcome


class Command(FibredCommand):
    help = (
        "Moves monoidal structure over a cocartesian base between its global and "
        "fibrewise presentations, or analyses the global one."
    )

    def add_inputs(self, parser) -> None:
        parser.add_argument(
            "direction",
            choices=DIRECTIONS,
            help=(
                "to-fibrewise and to-global convert; criterion checks that the total "
                "tensor is a coproduct; strictness reports which fibres are strict."
            ),
        )
        parser.add_argument("file", help="A lax monoidal or fibrewise monoidal entity.")

    def run(self, direction, file, **options) -> Outcome:
        self.transfer_app_services = TransferAppServices()
        if direction == TO_FIBREWISE:
            return self.to_fibrewise(self.load(file, LaxMonoidalIndexed))
        if direction == CRITERION:
            return self.cocartesian_total(self.load(file, LaxMonoidalIndexed))
        if direction == STRICTNESS:
            return self.strictness(self.load(file, LaxMonoidalIndexed))
        return self.to_global(self.load(file, FibrewiseMonoidal))

    def to_fibrewise(self, l: LaxMonoidalIndexed) -> Outcome:
        f, report = self.transfer_app_services.to_fibrewise(l)
        return f, report, ReportResponse(report, output_format=self.output_format)

    def to_global(self, f: FibrewiseMonoidal) -> Outcome:
        l, report = self.transfer_app_services.to_global(f)
        return l, report, ReportResponse(report, output_format=self.output_format)

    def cocartesian_total(self, l: LaxMonoidalIndexed) -> Outcome:
        report = self.transfer_app_services.cocartesian_total(l)
        return None, report, ReportResponse(report, output_format=self.output_format)

    def strictness(self, l: LaxMonoidalIndexed) -> Outcome:
        report = self.transfer_app_services.strictness(l)
        return None, report, ReportResponse(report, output_format=self.output_format)
