import logging
import random
from typing import Optional, Tuple

from django.conf import settings

from fibred.domain.fincat.models import FinCat, FinCatFactory, LawReport
from fibred.domain.indexed.generators import union_lax_monoidal
from fibred.domain.indexed.models import LaxMonoidalIndexed
from fibred.domain.indexed.services import IndexedServices
from fibred.domain.zoo.dynamics import DynamicsServices
from fibred.domain.zoo.models import MARKED_VERTEX, SIMPLE_GRAPH, DecoratorFactory
from fibred.domain.zoo.services import NetworkModelServices, ZooServices
from utils.django.exceptions import UnknownObject

log = logging.getLogger(__name__)

GRAPHS = "graphs"
MARKED = "marked"
SLICES = "slices"
SQUARE_SLICES = "square-slices"
FAMILIES = "families"
DDS = "dds"
UNION = "union"
TWISTED_UNION = "twisted-union"
FIXTURES = (
    GRAPHS,
    MARKED,
    SLICES,
    SQUARE_SLICES,
    FAMILIES,
    DDS,
    UNION,
    TWISTED_UNION,
)


def square_poset() -> FinCat:
    """{0, 1}² ordered componentwise."""
    return FinCatFactory.build_poset(
        ["00", "01", "10", "11"],
        lambda a, b: all(x <= y for x, y in zip(a, b)),
        name="2×2",
    )


class ZooAppServices:
    """
    Builds the worked examples as lax monoidal indexed categories, checked.

    Bounds default to the configured universe; explicit arguments override them.

    Attributes:
    - zoo_services (ZooServices)
    - network_model_services (NetworkModelServices)
    - dynamics_services (DynamicsServices)
    - indexed_services (IndexedServices)

    Methods:
    - build_fixture(fixture, ...) -> Tuple[LaxMonoidalIndexed, LawReport]
    """

    def __init__(self) -> None:
        self.zoo_services = ZooServices()
        self.network_model_services = NetworkModelServices()
        self.dynamics_services = DynamicsServices()
        self.indexed_services = IndexedServices()

    def build_fixture(
        self,
        fixture: str,
        vertex_bound: Optional[int] = None,
        set_bound: Optional[int] = None,
        state_bound: Optional[int] = None,
        port_bound: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> Tuple[LaxMonoidalIndexed, LawReport]:
        """
        Builds one fixture and checks it with check_lax_monoidal.

        Parameters:
        - fixture (str): One of FIXTURES.
            - "graphs", "marked": decorated FinSet skeleton up to vertex_bound vertices;
                the report also covers the network model of the decorator.
            - "slices", "square-slices": slices of the walking arrow or of {0, 1}².
            - "families": families over FinSet^op up to set_bound, valued in the walking
                arrow with joins.
            - "dds": Moore machines with at most state_bound states on wiring boxes with
                at most port_bound ports.
            - "union", "twisted-union": random union-closed families drawn from seed,
                the second with non-identity structure cells.

        Returns:
        - Tuple[LaxMonoidalIndexed, LawReport]

        Raises:
        - UnknownObject: For an unknown fixture name.
        - SizeLimitExceeded: If a bound is above what the fixture supports.
        - MonoidLawFailure: If a decorator's network model breaks a monoid law.
        """
        if fixture in (GRAPHS, MARKED):
            bound = settings.VERTEX_BOUND if vertex_bound is None else vertex_bound
            kind = SIMPLE_GRAPH if fixture == GRAPHS else MARKED_VERTEX
            if fixture == GRAPHS:
                l, _ = self.zoo_services.graph_opindexed(bound)
            else:
                l, _ = self.zoo_services.decorator_opindexed(
                    DecoratorFactory.build_entity(bound, kind)
                )
            report = self.indexed_services.check_lax_monoidal(l)
            model = self.network_model_services.decorator_to_network_model(
                DecoratorFactory.build_entity(bound, kind)
            )
            report.merge(
                self.network_model_services.check_network_model(model), "network-model"
            )
            report.merge(
                self.network_model_services.network_model_action(model), "action"
            )
            return l, report
        if fixture in (SLICES, SQUARE_SLICES):
            base = (
                FinCatFactory.build_walking_arrow()
                if fixture == SLICES
                else square_poset()
            )
            w = self.zoo_services.poset_witness(base)
            l = self.zoo_services.slice_opindexed(w)
        elif fixture == FAMILIES:
            arrow = self.zoo_services.poset_witness(FinCatFactory.build_walking_arrow())
            l, _ = self.zoo_services.family_fibration(arrow.monoidal, set_bound)
        elif fixture == DDS:
            l = self.dynamics_services.dds_indexed(state_bound, port_bound)
        elif fixture in (UNION, TWISTED_UNION):
            rng = random.Random(settings.SEED if seed is None else seed)
            l, _ = union_lax_monoidal(rng, twisted=fixture == TWISTED_UNION)
        else:
            raise UnknownObject(
                item="unknown-fixture",
                message=f"{fixture!r} is not one of {FIXTURES}",
            )
        log.info("built fixture %s: %d fibres", fixture, len(l.carrier.fibre))
        return l, self.indexed_services.check_lax_monoidal(l)
