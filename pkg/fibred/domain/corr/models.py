from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from fibred.domain.indexed.models import IndexedCat
from fibred.domain.moncat.models import MonoidalData, MonoidalFunctorData

# --------------------------------------------------
# FibrewiseMonoidal Model
# --------------------------------------------------


@dataclass(frozen=True)
class FibrewiseMonoidal:
    """
    An indexed category with monoidal fibres and strong monoidal reindexing.

    Attributes:
    - carrier (IndexedCat)
    - per_fibre (Dict[str, MonoidalData]): x -> (M x, ⊗_x, I_x).
    - reindex_monoidal (Dict[str, MonoidalFunctorData]): f -> M f with its strong
        structure φ_{a,b}: M f a ⊗ M f b -> M f (a ⊗ b), φ_0: I -> M f I.
    - skipped (Tuple[str, ...]): Objects whose fibre structure needs tensors outside
        the universe.
    - base_monoidal (Optional[MonoidalData]): The cocartesian structure of the base the
        fibre structure was folded along, when known.
    """

    carrier: IndexedCat
    per_fibre: Dict[str, MonoidalData]
    reindex_monoidal: Dict[str, MonoidalFunctorData]
    skipped: Tuple[str, ...] = ()
    base_monoidal: Optional[MonoidalData] = field(default=None, compare=False)
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"FibrewiseMonoidal({self.name})"


class FibrewiseMonoidalFactory:
    @staticmethod
    def build_entity(
        carrier: IndexedCat,
        per_fibre: Dict[str, MonoidalData],
        reindex_monoidal: Dict[str, MonoidalFunctorData],
        skipped: Tuple[str, ...] = (),
        base_monoidal: Optional[MonoidalData] = None,
        name: str = "",
    ) -> FibrewiseMonoidal:
        return FibrewiseMonoidal(
            carrier,
            dict(per_fibre),
            dict(reindex_monoidal),
            tuple(skipped),
            base_monoidal,
            name=name or f"fibrewise {carrier.name}",
        )


# --------------------------------------------------
# CocartTotalCriterion Model
# --------------------------------------------------


@dataclass(frozen=True)
class CocartTotalCriterion:
    """
    Fold and augmentation data for a lax monoidal M over a cocartesian base.

    Attributes:
    - kappa (Dict[str, Dict[str, str]]): κ^x_a: M(∇_x) μ_{x,x}(a, a) -> a in M x.
    - lambda_aug (Dict[str, Dict[str, str]]): λ^x_a: M(!_x) μ_0 -> a in M x.
    """

    kappa: Dict[str, Dict[str, str]]
    lambda_aug: Dict[str, Dict[str, str]]
    name: str = field(default="", compare=False)
