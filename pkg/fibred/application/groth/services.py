import logging
from typing import Any, Tuple

from fibred.application.transfer.services import TransferAppServices
from fibred.domain.corr.models import FibrewiseMonoidal
from fibred.domain.fib.models import ClovenFibration, MonoidalFibrationData
from fibred.domain.fib.services import FibrationServices
from fibred.domain.fincat.models import LawReport
from fibred.domain.groth.services import GrothServices
from fibred.domain.indexed.models import IndexedCat, LaxMonoidalIndexed
from fibred.domain.indexed.services import IndexedServices
from utils.django.exceptions import ShapeMismatch

log = logging.getLogger(__name__)


class GrothAppServices:
    """
    The Grothendieck construction as a use case: build a total, check it, and confirm
    that the construction round-trips.

    Attributes:
    - groth_services (GrothServices)
    - fibration_services (FibrationServices)
    - indexed_services (IndexedServices)
    - transfer_app_services (TransferAppServices): Round trips of monoidal data.

    Methods:
    - build_total(m) -> Tuple[ClovenFibration, LawReport]
    - build_monoidal_total(l) -> Tuple[MonoidalFibrationData, LawReport]
    - roundtrip(subject) -> LawReport
    """

    def __init__(self) -> None:
        self.groth_services = GrothServices()
        self.fibration_services = FibrationServices()
        self.indexed_services = IndexedServices()
        self.transfer_app_services = TransferAppServices()

    def build_total(self, m: IndexedCat) -> Tuple[ClovenFibration, LawReport]:
        """
        Builds ∫M with its projection and checks the projection's cleavage.

        Parameters:
        - m (IndexedCat): Contravariant gives a fibration, covariant an opfibration.

        Returns:
        - Tuple[ClovenFibration, LawReport]: The projection and its check, with a note
            comparing the object count to the sum over the fibres.
        """
        g = self.groth_services.grothendieck(m)
        report = self.fibration_services.check_fibration(g.fibration)
        self._count(report, m, g.total.objects)
        return g.fibration, report

    def build_monoidal_total(
        self, l: LaxMonoidalIndexed
    ) -> Tuple[MonoidalFibrationData, LawReport]:
        """
        Builds the monoidal total of l and checks it as a monoidal category and as a
        monoidal (op)fibration. Braided input is checked for the braiding as well.
        """
        data = self.groth_services.monoidal_grothendieck(l)
        report = self.fibration_services.check_monoidal_fibration(data)
        self._count(report, l.carrier, data.carrier.total.objects)
        return data, report

    def roundtrip(self, subject: Any) -> LawReport:
        """
        Round-trips the subject through the construction that fits it.

        Indexed categories and fibrations go through the Grothendieck construction,
        lax monoidal and fibrewise data through the global/fibrewise transfer. The input
        is checked first; a failing input is reported without the round trip.

        Raises:
        - ShapeMismatch: For any other kind of entity.
        """
        if isinstance(subject, (LaxMonoidalIndexed, FibrewiseMonoidal)):
            return self.transfer_app_services.roundtrip(subject)
        if isinstance(subject, ClovenFibration):
            checked = self.fibration_services.check_fibration(subject)
        elif isinstance(subject, IndexedCat):
            checked = self.indexed_services.check_pseudofunctor(subject)
        else:
            raise ShapeMismatch(
                item="roundtrip-subject",
                message=f"cannot round-trip a {type(subject).__name__}",
            )
        report = LawReport(subject=f"roundtrip {subject.name}")
        report.merge(checked, "input")
        if report.passed:
            report.merge(self.groth_services.roundtrip_check(subject))
        return report.finish()

    @staticmethod
    def _count(report: LawReport, m: IndexedCat, objects) -> None:
        expected = sum(len(m.at(x).objects) for x in m.base.objects)
        report.expect(
            "object-count",
            (str(len(objects)),),
            lambda: len(objects),
            lambda: expected,
            f"the total has {len(objects)} objects, the fibres {expected}",
        )
        base = len(m.base.objects)
        report.note(f"total: {len(objects)} objects over {base} base objects")
