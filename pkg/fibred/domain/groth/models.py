from dataclasses import dataclass, field
from typing import Dict, Tuple

from fibred.domain.fib.models import ClovenFibration
from fibred.domain.fincat.models import FinCat
from fibred.domain.indexed.models import GrothMor, IndexedCat
from utils.data_manipulation.type_conversion import pair
from utils.django.exceptions import UnknownObject

# --------------------------------------------------
# GrothResult Model
# --------------------------------------------------


@dataclass(frozen=True)
class GrothResult:
    """
    The total category ∫M of an indexed category, its projection and provenance.

    Attributes:
    - source (IndexedCat): M.
    - total (FinCat): Objects "(x|a)", morphisms named by IndexedCat.g_ident.
    - fibration (ClovenFibration): The projection with the canonical lifts (f, 1).
    - objects (Dict[str, Tuple[str, str]]): Object identifier -> (x, a).
    - morphisms (Dict[str, GrothMor]): Morphism identifier -> (f, k) with its ends.
    """

    source: IndexedCat
    total: FinCat
    fibration: ClovenFibration
    objects: Dict[str, Tuple[str, str]]
    morphisms: Dict[str, GrothMor]
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"GrothResult({self.name})"

    @staticmethod
    def obj_id(p: Tuple[str, str]) -> str:
        return pair(*p)

    def mor_id(self, m: GrothMor) -> str:
        return self.source.g_ident(m)

    def decode(self, k: str) -> GrothMor:
        try:
            return self.morphisms[k]
        except KeyError:
            raise UnknownObject(
                item="unknown-morphism",
                message=f"{k!r} is not a morphism of {self.total.name}",
            )


class GrothResultFactory:
    @staticmethod
    def build_entity(
        source: IndexedCat,
        total: FinCat,
        fibration: ClovenFibration,
        objects: Dict[str, Tuple[str, str]],
        morphisms: Dict[str, GrothMor],
        name: str = "",
    ) -> GrothResult:
        return GrothResult(
            source,
            total,
            fibration,
            dict(objects),
            dict(morphisms),
            name=name or total.name,
        )
