from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Tuple

from fibred.domain.fincat.models import FinCat, FinFunctor, FinFunctorFactory, NatTrans
from fibred.domain.fincat.services import FinCatServices
from fibred.domain.moncat.models import MonoidalData
from utils.data_manipulation.type_conversion import pair
from utils.django.exceptions import MalformedTable, MissingLift

FIBRATION = "fibration"
OPFIBRATION = "opfibration"
DIRECTIONS = (FIBRATION, OPFIBRATION)

# --------------------------------------------------
# ClovenFibration Model
# --------------------------------------------------


@dataclass(frozen=True)
class ClovenFibration:
    """
    A functor P: total -> base with chosen (co)cartesian lifts.

    Attributes:
    - total (FinCat), base (FinCat)
    - proj (FinFunctor): P.
    - cleavage (Dict[Tuple[str, str], str]): (f, e) -> lift. For a fibration e lies over
        cod f and the lift Cart(f, e) ends at e; for an opfibration e lies over dom f and
        the lift Cocart(f, e) starts at e.
    - direction (str): "fibration" or "opfibration".
    - split (bool): Claims that lifts of identities are identities and lifts compose.
    """

    total: FinCat
    base: FinCat
    proj: FinFunctor
    cleavage: Dict[Tuple[str, str], str]
    direction: str = FIBRATION
    split: bool = False
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"ClovenFibration({self.name})"

    @property
    def opfibration(self) -> bool:
        return self.direction == OPFIBRATION

    def over(self, e: str) -> str:
        return self.proj.obj(e)

    def over_mor(self, k: str) -> str:
        return self.proj.mor(k)

    def lift(self, f: str, e: str) -> str:
        try:
            return self.cleavage[(f, e)]
        except KeyError:
            raise MissingLift(
                item="missing-lift",
                message=f"{self.name}: no chosen lift of {f} at {e}",
            )

    def lift_end(self, f: str, e: str) -> str:
        """f*e for a fibration, f_!e for an opfibration."""
        k = self.lift(f, e)
        return self.total.cod(k) if self.opfibration else self.total.dom(k)

    def lift_keys(self) -> List[Tuple[str, str]]:
        """Every (f, e) a cleavage must cover."""
        keys = []
        for f in self.base.mor_ids:
            x, y = self.base.morphisms[f]
            for e in self.objects_over(x if self.opfibration else y):
                keys.append((f, e))
        return keys

    def objects_over(self, x: str) -> Tuple[str, ...]:
        return self._objects_over.get(x, ())

    @cached_property
    def _objects_over(self) -> Dict[str, Tuple[str, ...]]:
        grouped: Dict[str, List[str]] = {}
        for e in self.total.objects:
            grouped.setdefault(self.proj.obj(e), []).append(e)
        return {x: tuple(es) for x, es in grouped.items()}


class ClovenFibrationFactory:
    """
    A factory class for building ClovenFibration instances.

    Methods:
    - build_entity(...) -> ClovenFibration
    - build_projection(base, fibre) -> ClovenFibration: base × fibre -> base with lifts (f, 1).
    """

    @staticmethod
    def build_entity(
        total: FinCat,
        base: FinCat,
        proj: FinFunctor,
        cleavage: Dict[Tuple[str, str], str],
        direction: str = FIBRATION,
        split: bool = False,
        name: str = "",
    ) -> ClovenFibration:
        if direction not in DIRECTIONS:
            raise MalformedTable(
                item="unknown-direction",
                message=f"{direction!r} is not one of {DIRECTIONS}",
            )
        return ClovenFibration(
            total,
            base,
            proj,
            dict(cleavage),
            direction,
            split,
            name=name or f"P: {total.name} -> {base.name}",
        )

    @classmethod
    def build_projection(
        cls, base: FinCat, fibre: FinCat, direction: str = FIBRATION
    ) -> ClovenFibration:
        total = FinCatServices.product(base, fibre)
        proj = FinFunctorFactory.build_entity(
            total,
            base,
            {pair(x, a): x for x in base.objects for a in fibre.objects},
            {pair(f, k): f for f in base.morphisms for k in fibre.morphisms},
            name="π",
        )
        cleavage = {}
        for f, (x, y) in base.morphisms.items():
            for a in fibre.objects:
                end = y if direction == FIBRATION else x
                cleavage[(f, pair(end, a))] = pair(f, fibre.id(a))
        return cls.build_entity(
            total,
            base,
            proj,
            cleavage,
            direction,
            split=True,
            name=f"{base.name}×{fibre.name} -> {base.name}",
        )


# --------------------------------------------------
# Fibred cells
# --------------------------------------------------


@dataclass(frozen=True)
class Fibred1Cell:
    """
    A commutative square Q∘H = F∘P between (op)fibrations P and Q.

    Attributes:
    - source (ClovenFibration): P.
    - target (ClovenFibration): Q.
    - top (FinFunctor): H between the totals.
    - bottom (FinFunctor): F between the bases.
    """

    source: ClovenFibration
    target: ClovenFibration
    top: FinFunctor
    bottom: FinFunctor
    name: str = field(default="", compare=False)


@dataclass(frozen=True)
class Fibred2Cell:
    """
    A pair of transformations β: H ⇒ K above α: F ⇒ G.

    Attributes:
    - source (Fibred1Cell), target (Fibred1Cell)
    - top (NatTrans): β.
    - bottom (NatTrans): α.
    """

    source: Fibred1Cell
    target: Fibred1Cell
    top: NatTrans
    bottom: NatTrans
    name: str = field(default="", compare=False)


class FibredCellFactory:
    @staticmethod
    def build_1cell(
        source: ClovenFibration,
        target: ClovenFibration,
        top: FinFunctor,
        bottom: FinFunctor,
        name: str = "",
    ) -> Fibred1Cell:
        return Fibred1Cell(source, target, top, bottom, name=name or top.name)

    @staticmethod
    def build_2cell(
        source: Fibred1Cell,
        target: Fibred1Cell,
        top: NatTrans,
        bottom: NatTrans,
        name: str = "",
    ) -> Fibred2Cell:
        return Fibred2Cell(source, target, top, bottom, name=name or top.name)


# --------------------------------------------------
# MonoidalFibrationData Model
# --------------------------------------------------


@dataclass(frozen=True)
class MonoidalFibrationData:
    """
    A monoidal (op)fibration: P strict monoidal and ⊗ preserving chosen lifts.

    Attributes:
    - carrier (ClovenFibration)
    - total_monoidal (MonoidalData): Structure on carrier.total.
    - base_monoidal (MonoidalData): Structure on carrier.base.
    """

    carrier: ClovenFibration
    total_monoidal: MonoidalData
    base_monoidal: MonoidalData
    name: str = field(default="", compare=False)
