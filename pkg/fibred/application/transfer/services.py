import logging
from typing import Tuple, Union

from django.conf import settings

from fibred.domain.corr.models import FibrewiseMonoidal
from fibred.domain.corr.services import CorrServices
from fibred.domain.fincat.models import LawReport
from fibred.domain.indexed.models import LaxMonoidalIndexed
from fibred.domain.indexed.services import IndexedServices
from fibred.domain.moncat.models import CocartesianWitness
from fibred.domain.moncat.services import CocartesianServices
from utils.django.exceptions import BaseNotCocartesian, ShapeMismatch

log = logging.getLogger(__name__)

TO_FIBREWISE = "to-fibrewise"
TO_GLOBAL = "to-global"
CRITERION = "criterion"
STRICTNESS = "strictness"
DIRECTIONS = (TO_FIBREWISE, TO_GLOBAL, CRITERION, STRICTNESS)


class TransferAppServices:
    """
    Moves monoidal structure between the global and the fibrewise presentation.

    Attributes:
    - corr_services (CorrServices)
    - indexed_services (IndexedServices)
    - cocartesian_services (CocartesianServices)

    Methods:
    - witness(subject) -> CocartesianWitness
    - to_fibrewise(l) -> Tuple[FibrewiseMonoidal, LawReport]
    - to_global(f) -> Tuple[LaxMonoidalIndexed, LawReport]
    - roundtrip(subject) -> LawReport
    - cocartesian_total(l) -> LawReport
    - strictness(l) -> LawReport
    """

    def __init__(self) -> None:
        self.corr_services = CorrServices()
        self.indexed_services = IndexedServices()
        self.cocartesian_services = CocartesianServices()

    def witness(
        self, subject: Union[LaxMonoidalIndexed, FibrewiseMonoidal]
    ) -> CocartesianWitness:
        """
        The cocartesian structure of the base, read off the recorded base monoidal
        structure when there is one and searched for otherwise.

        Raises:
        - BaseNotCocartesian: If the base has no initial object.
        - ShapeMismatch: For other subjects.
        """
        if isinstance(subject, LaxMonoidalIndexed):
            return self.cocartesian_services.witness_for(subject.base_monoidal)
        if not isinstance(subject, FibrewiseMonoidal):
            raise ShapeMismatch(
                item="transfer-subject",
                message=f"cannot transfer a {type(subject).__name__}",
            )
        if subject.base_monoidal is not None:
            return self.cocartesian_services.witness_for(subject.base_monoidal)
        base = subject.carrier.base
        w = self.cocartesian_services.find_cocartesian(
            base, max_objects=settings.SEARCH_MAX_OBJECTS
        )
        if w is None:
            raise BaseNotCocartesian(
                item="no-initial-object", message=f"{base.name} has no initial object"
            )
        log.info("searched %s: %d coproducts", base.name, len(w.coprojections))
        return w

    def to_fibrewise(
        self, l: LaxMonoidalIndexed
    ) -> Tuple[FibrewiseMonoidal, LawReport]:
        """
        Parameters:
        - l (LaxMonoidalIndexed): Covariant data over a cocartesian base.

        Returns:
        - Tuple[FibrewiseMonoidal, LawReport]: The fibre structures and their check.
        """
        f = self.corr_services.global_to_fibrewise(l, self.witness(l))
        return f, self.corr_services.check_fibrewise(f)

    def to_global(self, f: FibrewiseMonoidal) -> Tuple[LaxMonoidalIndexed, LawReport]:
        l = self.corr_services.fibrewise_to_global(f, self.witness(f))
        return l, self.indexed_services.check_lax_monoidal(l)

    def roundtrip(self, subject) -> LawReport:
        return self.corr_services.roundtrip_transfer(
            subject, self.witness(subject), check_input=True
        )

    def cocartesian_total(self, l: LaxMonoidalIndexed) -> LawReport:
        """Searches for κ and λ and checks that the total tensor is a coproduct."""
        w = self.witness(l)
        criterion = self.corr_services.search_criterion(l, w)
        return self.corr_services.check_cocartesian_total(l, criterion, w)

    def strictness(self, l: LaxMonoidalIndexed) -> LawReport:
        return self.corr_services.strictness_analysis(l, self.witness(l))
