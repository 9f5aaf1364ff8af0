import logging
from pathlib import Path
from typing import Any, Iterable, Tuple

from fibred.domain.corr.models import FibrewiseMonoidal
from fibred.domain.corr.services import CorrServices
from fibred.domain.fib.models import ClovenFibration, MonoidalFibrationData
from fibred.domain.fib.services import FibrationServices
from fibred.domain.fincat.models import FinCat, FinFunctor, LawReport, NatTrans
from fibred.domain.fincat.services import (
    FinCatServices,
    FinFunctorServices,
    NatTransServices,
)
from fibred.domain.indexed.models import IndexedCat, LaxMonoidalIndexed
from fibred.domain.indexed.services import IndexedServices
from fibred.domain.moncat.models import MonoidalData
from fibred.domain.moncat.services import MonoidalServices
from fibred.infrastructure.interchange.services import InterchangeServices, Workspace
from utils.django.exceptions import ShapeMismatch

log = logging.getLogger(__name__)


class CheckAppServices:
    """
    Law checking for every entity the interchange format carries.

    Attributes:
    - fincat_services (FinCatServices)
    - functor_services (FinFunctorServices)
    - nat_trans_services (NatTransServices)
    - monoidal_services (MonoidalServices)
    - indexed_services (IndexedServices)
    - fibration_services (FibrationServices)
    - corr_services (CorrServices)
    - interchange_services (InterchangeServices)

    Methods:
    - check_entity(entity) -> LawReport: Runs the checker that fits the entity's kind.
    - check_files(paths) -> Tuple[Workspace, LawReport]: Loads a workspace and checks
        every entity in it.
    """

    def __init__(self) -> None:
        self.fincat_services = FinCatServices()
        self.functor_services = FinFunctorServices()
        self.nat_trans_services = NatTransServices()
        self.monoidal_services = MonoidalServices()
        self.indexed_services = IndexedServices()
        self.fibration_services = FibrationServices()
        self.corr_services = CorrServices()
        self.interchange_services = InterchangeServices()

    def check_entity(self, entity: Any) -> LawReport:
        """
        Runs the checker that fits the entity's kind.

        A stored report is returned as it is, so a saved failure keeps failing.

        Raises:
        - ShapeMismatch: For objects that are not interchange entities.
        """
        checkers = [
            (FinCat, self.fincat_services.check_category),
            (FinFunctor, self.functor_services.check_functor),
            (NatTrans, self.nat_trans_services.check_nat_trans),
            (MonoidalData, self.monoidal_services.check_monoidal),
            (LaxMonoidalIndexed, self.indexed_services.check_lax_monoidal),
            (IndexedCat, self.indexed_services.check_pseudofunctor),
            (MonoidalFibrationData, self.fibration_services.check_monoidal_fibration),
            (ClovenFibration, self.fibration_services.check_fibration),
            (FibrewiseMonoidal, self.corr_services.check_fibrewise),
            (LawReport, lambda report: report),
        ]
        for kind, checker in checkers:
            if isinstance(entity, kind):
                return checker(entity)
        raise ShapeMismatch(
            item="unknown-kind",
            message=f"nothing checks a {type(entity).__name__}",
        )

    def check_files(self, paths: Iterable[Path]) -> Tuple[Workspace, LawReport]:
        """
        Loads every file into one workspace and checks each entity.

        Parameters:
        - paths (Iterable[Path]): Interchange files; entity names are unique.

        Returns:
        - Tuple[Workspace, LawReport]: The workspace and one report with a section per
            entity, prefixed by its name.

        Raises:
        - ParseError: If a file cannot be read or two entities share a name.
        """
        workspace = self.interchange_services.load_workspace(paths)
        names = ", ".join(workspace.entities)
        report = LawReport(subject=f"lawcheck {names}")
        for name, entity in workspace.entities.items():
            log.info("checking %s from %s", name, workspace.sources[name])
            report.merge(self.check_entity(entity), name)
        return workspace, report
