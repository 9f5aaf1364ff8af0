from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from fibred.domain.fincat.models import Bifunctor, BifunctorFactory, FinCat, FinFunctor
from utils.django.exceptions import MalformedTable, NotUniversal, UnknownObject

STRENGTHS = ("lax", "strong", "strict")

# --------------------------------------------------
# MonoidalData Model
# --------------------------------------------------


@dataclass(frozen=True)
class MonoidalData:
    """
    Monoidal structure on a finite category, as explicit component tables.

    Attributes:
    - base (FinCat): The underlying category.
    - tensor (Bifunctor): base × base -> base, possibly partial in bounded universes.
    - unit (str): The unit object I.
    - associator (Dict[Tuple[str, str, str], str]): α_{x,y,z}: (x⊗y)⊗z -> x⊗(y⊗z).
    - left_unitor (Dict[str, str]): l_x: I⊗x -> x.
    - right_unitor (Dict[str, str]): r_x: x⊗I -> x.
    - braiding (Optional[Dict[Tuple[str, str], str]]): b_{x,y}: x⊗y -> y⊗x.
    - symmetric (bool): Whether b_{y,x}∘b_{x,y} = 1 is claimed.
    """

    base: FinCat
    tensor: Bifunctor
    unit: str
    associator: Dict[Tuple[str, str, str], str]
    left_unitor: Dict[str, str]
    right_unitor: Dict[str, str]
    braiding: Optional[Dict[Tuple[str, str], str]] = None
    symmetric: bool = False
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"MonoidalData({self.name or self.base.name})"

    def defined(self, x: str, y: str) -> bool:
        return self.tensor.defined(x, y)

    def t(self, x: str, y: str) -> str:
        return self.tensor.obj(x, y)

    def tm(self, f: str, g: str) -> str:
        return self.tensor.mor(f, g)

    def alpha(self, x: str, y: str, z: str) -> str:
        return self._lookup(
            self.associator,
            (x, y, z),
            "associator",
            self.t(self.t(x, y), z),
            self.t(x, self.t(y, z)),
        )

    def lam(self, x: str) -> str:
        return self._lookup(self.left_unitor, x, "left-unitor", self.t(self.unit, x))

    def rho(self, x: str) -> str:
        return self._lookup(self.right_unitor, x, "right-unitor", self.t(x, self.unit))

    def beta(self, x: str, y: str) -> str:
        if self.braiding is None:
            raise MalformedTable(
                item="no-braiding", message=f"{self.name} has no braiding"
            )
        return self._lookup(
            self.braiding, (x, y), "braiding", self.t(x, y), self.t(y, x)
        )

    def _lookup(self, table, key, label, *needed):
        # The tensor lookups in `needed` raise UnknownObject first when the instance is
        # outside the universe; a miss afterwards is a genuinely missing entry.
        try:
            return table[key]
        except KeyError:
            raise MalformedTable(
                item=f"missing-{label}", message=f"{self.name}: no {label} at {key}"
            )


class MonoidalFactory:
    """
    A factory class for building MonoidalData.

    Methods:
    - build_entity(...) -> MonoidalData
    - build_strict(base, tensor, unit, braiding=None, symmetric=False) -> MonoidalData:
        Identity associator and unitors; requires the tensor to be strictly associative and unital on objects.
    - build_trivial(base) -> MonoidalData: For a one-object category with a commutative composition.
    """

    @staticmethod
    def build_entity(
        base: FinCat,
        tensor: Bifunctor,
        unit: str,
        associator: Dict[Tuple[str, str, str], str],
        left_unitor: Dict[str, str],
        right_unitor: Dict[str, str],
        braiding: Optional[Dict[Tuple[str, str], str]] = None,
        symmetric: bool = False,
        name: str = "",
    ) -> MonoidalData:
        return MonoidalData(
            base=base,
            tensor=tensor,
            unit=unit,
            associator=dict(associator),
            left_unitor=dict(left_unitor),
            right_unitor=dict(right_unitor),
            braiding=dict(braiding) if braiding is not None else None,
            symmetric=symmetric,
            name=name or f"({base.name}, {tensor.name})",
        )

    @classmethod
    def build_strict(
        cls,
        base: FinCat,
        tensor: Bifunctor,
        unit: str,
        braiding: Optional[Dict[Tuple[str, str], str]] = None,
        symmetric: bool = False,
        name: str = "",
    ) -> MonoidalData:
        associator = {}
        for (x, y), xy in tensor.obj_map.items():
            for z in base.objects:
                if tensor.defined(xy, z) and tensor.defined(y, z):
                    associator[(x, y, z)] = base.id(tensor.obj(xy, z))
        return cls.build_entity(
            base,
            tensor,
            unit,
            associator,
            {x: base.id(x) for x in base.objects if tensor.defined(unit, x)},
            {x: base.id(x) for x in base.objects if tensor.defined(x, unit)},
            braiding=braiding,
            symmetric=symmetric,
            name=name,
        )

    @classmethod
    def build_trivial(cls, base: FinCat) -> MonoidalData:
        """
        The one-object category of a commutative monoid, with composition as tensor.

        Raises:
        - MalformedTable: If base has more than one object.
        """
        if len(base.objects) != 1:
            raise MalformedTable(
                item="not-one-object", message=f"{base.name} has several objects"
            )
        (star,) = base.objects
        tensor = BifunctorFactory.build_from_functions(
            base,
            base,
            base,
            lambda a, b: star,
            lambda f, g: base.comp(f, g),
            name="∘",
        )
        return cls.build_strict(
            base,
            tensor,
            star,
            braiding={(star, star): base.id(star)},
            symmetric=True,
            name=f"({base.name}, ∘)",
        )


# --------------------------------------------------
# MonoidalFunctorData Model
# --------------------------------------------------


@dataclass(frozen=True)
class MonoidalFunctorData:
    """
    A lax, strong or strict monoidal functor.

    Attributes:
    - underlying (FinFunctor): F.
    - laxator (Dict[Tuple[str, str], str]): φ_{a,b}: Fa⊗Fb -> F(a⊗b).
    - unit_mor (str): φ_0: I -> F(I).
    - strength (str): One of "lax", "strong", "strict".
    """

    underlying: FinFunctor
    laxator: Dict[Tuple[str, str], str]
    unit_mor: str
    strength: str = "lax"
    name: str = field(default="", compare=False)

    def phi(self, a: str, b: str) -> str:
        try:
            return self.laxator[(a, b)]
        except KeyError:
            raise UnknownObject(
                item="missing-laxator",
                message=f"{self.name}: no laxator at ({a}, {b})",
            )


class MonoidalFunctorFactory:
    @staticmethod
    def build_entity(
        underlying: FinFunctor,
        laxator: Dict[Tuple[str, str], str],
        unit_mor: str,
        strength: str = "lax",
        name: str = "",
    ) -> MonoidalFunctorData:
        if strength not in STRENGTHS:
            raise MalformedTable(
                item="unknown-strength",
                message=f"{strength!r} is not one of {STRENGTHS}",
            )
        return MonoidalFunctorData(
            underlying, dict(laxator), unit_mor, strength, name=name or underlying.name
        )

    @classmethod
    def build_identity(
        cls, m: MonoidalData, functor: FinFunctor
    ) -> MonoidalFunctorData:
        """Identity laxator on a functor that strictly preserves tensors, e.g. the identity."""
        return cls.build_entity(
            functor,
            {(a, b): m.base.id(m.t(a, b)) for (a, b) in m.tensor.obj_map},
            m.base.id(m.unit),
            strength="strict",
            name=functor.name,
        )


# --------------------------------------------------
# CocartesianWitness Model
# --------------------------------------------------


@dataclass(frozen=True)
class CocartesianWitness:
    """
    Certified coproducts and an initial object, packaged with their monoidal structure.

    Attributes:
    - monoidal (MonoidalData): Tensor = chosen coproducts, unit = initial object.
    - coprojections (Dict[Tuple[str, str], Tuple[str, str]]): (x, y) -> (ι_x, ι_y) into x+y.
    - codiagonal (Dict[str, str]): ∇_x: x+x -> x, where x+x is in the universe.
    - initial (str): The object 0.
    - bang (Dict[str, str]): !_x: 0 -> x.
    """

    monoidal: MonoidalData
    coprojections: Dict[Tuple[str, str], Tuple[str, str]]
    codiagonal: Dict[str, str]
    initial: str
    bang: Dict[str, str]
    name: str = field(default="", compare=False)

    @property
    def base(self) -> FinCat:
        return self.monoidal.base

    def plus(self, x: str, y: str) -> str:
        return self.monoidal.t(x, y)

    def iota(self, x: str, y: str) -> Tuple[str, str]:
        try:
            return self.coprojections[(x, y)]
        except KeyError:
            raise UnknownObject(
                item="undefined-coproduct",
                message=f"{self.name}: {x}+{y} is outside the universe",
            )

    def nabla(self, x: str) -> str:
        try:
            return self.codiagonal[x]
        except KeyError:
            raise UnknownObject(
                item="undefined-coproduct",
                message=f"{self.name}: {x}+{x} is outside the universe",
            )

    def mediate(self, x: str, y: str, f: str, g: str) -> str:
        """
        The unique [f, g]: x+y -> w with [f, g]∘ι_x = f and [f, g]∘ι_y = g.

        Raises:
        - NotUniversal: If zero or several morphisms mediate.
        """
        c = self.base
        i, j = self.iota(x, y)
        w = c.cod(f)
        found = [
            h
            for h in c.hom(self.plus(x, y), w)
            if c.comp(h, i) == f and c.comp(h, j) == g
        ]
        if len(found) != 1:
            raise NotUniversal(
                item="not-universal",
                message=f"{len(found)} mediators for ({f}, {g}) out of {x}+{y}",
            )
        return found[0]
