import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Tuple

from dataclass_type_validator import dataclass_validate

from utils.django.exceptions import MalformedTable, ShapeMismatch, UnknownObject

log = logging.getLogger(__name__)

# --------------------------------------------------
# Law reports
# --------------------------------------------------


@dataclass_validate(before_post_init=True)
@dataclass(frozen=True)
class LawViolation:
    """
    A single failed law instance.

    Attributes:
    - law (str): Short kebab-case name of the law, e.g. "associativity".
    - witness (tuple): Identifiers that exhibit the failure, e.g. the triple (h, g, f).
    - message (str): Human readable description of the failure.
    """

    law: str
    witness: tuple
    message: str


@dataclass
class LawReport:
    """
    Outcome of a checker run.

    Checkers record the laws they enumerate, the first violated instance of each law,
    and notes about delegated or skipped instances. Malformed input raises instead.

    Attributes:
    - subject (str): What was checked.
    - checked (List[str]): Laws enumerated, in order.
    - violations (List[LawViolation]): First violation per law, or every violation for
        laws recorded with `every=True`.
    - notes (List[str]): Delegations, skipped partial instances, strictness observations.
    - instances (int): Number of law instances evaluated.
    """

    subject: str
    checked: List[str] = field(default_factory=list)
    violations: List[LawViolation] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    instances: int = 0
    skipped: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def law(self, name: str) -> None:
        if name not in self.checked:
            self.checked.append(name)

    def tick(self, count: int = 1) -> None:
        self.instances += count

    def skip(self, law: str, count: int = 1) -> None:
        """Counts instances of law that fall outside the universe."""
        self.skipped[law] = self.skipped.get(law, 0) + count

    def fail(self, law: str, witness, message: str, every: bool = False) -> None:
        self.law(law)
        if not every and any(v.law == law for v in self.violations):
            return
        self.violations.append(LawViolation(law, tuple(witness), message))

    def expect(
        self,
        law: str,
        witness,
        lhs: Callable[[], object],
        rhs: Callable[[], object],
        message: str = "",
    ) -> bool:
        """
        Evaluates both sides of one law instance and records a violation if they differ.

        Instances that reach outside a partial tensor are counted as skipped. A side that
        needs a missing composite counts as a violation.
        """
        self.law(law)
        try:
            left, right = lhs(), rhs()
        except UnknownObject:
            self.skip(law)
            return True
        except MalformedTable as e:
            self.tick()
            self.fail(law, witness, f"{message or law}: {e.message}")
            return False
        self.tick()
        if left != right:
            self.fail(law, witness, message or f"{left} != {right}")
            return False
        return True

    def finish(self) -> "LawReport":
        for law, count in self.skipped.items():
            self.note(f"{law}: {count} instances outside the universe skipped")
        log.info(
            "checked %s: %d instances, %d violations",
            self.subject,
            self.instances,
            len(self.violations),
        )
        return self

    def note(self, message: str) -> None:
        if message not in self.notes:
            self.notes.append(message)

    def failed(self, law: str) -> bool:
        return any(v.law == law for v in self.violations)

    def first(self, law: Optional[str] = None) -> Optional[LawViolation]:
        for violation in self.violations:
            if law is None or violation.law == law:
                return violation
        return None

    def merge(self, other: "LawReport", prefix: str = "") -> "LawReport":
        prefix = f"{prefix}." if prefix else ""
        for name in other.checked:
            self.law(prefix + name)
        for v in other.violations:
            self.violations.append(LawViolation(prefix + v.law, v.witness, v.message))
        for note in other.notes:
            self.note(note)
        self.instances += other.instances
        for law, count in other.skipped.items():
            self.skip(prefix + law, count)
        return self


# --------------------------------------------------
# FinCat Model
# --------------------------------------------------


@dataclass(frozen=True)
class FinCat:
    """
    A finite category given by explicit tables.

    Attributes:
    - objects (Tuple[str, ...]): Object identifiers.
    - morphisms (Dict[str, Tuple[str, str]]): Morphism identifier -> (dom, cod).
    - identity (Dict[str, str]): Object -> identity morphism.
    - compose (Dict[Tuple[str, str], str]): (g, f) -> g∘f for every composable pair.
    - name (str): Display name; ignored by equality.

    Note:
    - Equality is structural equality of the tables.
    - Instances are never mutated after construction; the dict fields are shared, not copied.
    """

    objects: Tuple[str, ...]
    morphisms: Dict[str, Tuple[str, str]]
    identity: Dict[str, str]
    compose: Dict[Tuple[str, str], str]
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        size = f"{len(self.objects)} objects, {len(self.morphisms)} morphisms"
        return f"FinCat({self.name or '?'}: {size})"

    def has_object(self, x: str) -> bool:
        return x in self._object_set

    def dom(self, f: str) -> str:
        return self._typing(f)[0]

    def cod(self, f: str) -> str:
        return self._typing(f)[1]

    def id(self, x: str) -> str:
        try:
            return self.identity[x]
        except KeyError:
            raise UnknownObject(
                item="unknown-object", message=f"{x!r} is not an object of {self.name}"
            )

    def comp(self, *fs: str) -> str:
        """Composite of fs read right to left: comp(h, g, f) = h∘g∘f."""

        def step(g: str, f: str) -> str:
            try:
                return self.compose[(g, f)]
            except KeyError:
                raise MalformedTable(
                    item="missing-composite",
                    message=f"{self.name}: no composite for ({g}, {f})",
                )

        return reduce(lambda acc, f: step(acc, f), fs[1:], fs[0])

    def hom(self, x: str, y: str) -> Tuple[str, ...]:
        return self._homs.get((x, y), ())

    def out_of(self, x: str) -> Tuple[str, ...]:
        return self._outgoing.get(x, ())

    def into(self, y: str) -> Tuple[str, ...]:
        return self._incoming.get(y, ())

    def is_identity(self, f: str) -> bool:
        return self.identity.get(self.dom(f)) == f

    def is_iso(self, f: str) -> bool:
        return f in self._inverses

    def inverse(self, f: str) -> str:
        try:
            return self._inverses[f]
        except KeyError:
            raise ShapeMismatch(
                item="not-invertible", message=f"{self.name}: {f} is not invertible"
            )

    def composable_pairs(self) -> Iterator[Tuple[str, str]]:
        for f in self.mor_ids:
            for g in self.out_of(self.cod(f)):
                yield g, f

    def composable_triples(self) -> Iterator[Tuple[str, str, str]]:
        for g, f in self.composable_pairs():
            for h in self.out_of(self.cod(g)):
                yield h, g, f

    @cached_property
    def mor_ids(self) -> Tuple[str, ...]:
        return tuple(sorted(self.morphisms))

    @cached_property
    def _object_set(self) -> frozenset:
        return frozenset(self.objects)

    def _typing(self, f: str) -> Tuple[str, str]:
        try:
            return self.morphisms[f]
        except KeyError:
            raise UnknownObject(
                item="unknown-morphism",
                message=f"{f!r} is not a morphism of {self.name}",
            )

    @cached_property
    def _homs(self) -> Dict[Tuple[str, str], Tuple[str, ...]]:
        homs: Dict[Tuple[str, str], List[str]] = {}
        for f in self.mor_ids:
            homs.setdefault(self.morphisms[f], []).append(f)
        return {key: tuple(value) for key, value in homs.items()}

    @cached_property
    def _outgoing(self) -> Dict[str, Tuple[str, ...]]:
        out: Dict[str, List[str]] = {}
        for f in self.mor_ids:
            out.setdefault(self.morphisms[f][0], []).append(f)
        return {key: tuple(value) for key, value in out.items()}

    @cached_property
    def _incoming(self) -> Dict[str, Tuple[str, ...]]:
        inc: Dict[str, List[str]] = {}
        for f in self.mor_ids:
            inc.setdefault(self.morphisms[f][1], []).append(f)
        return {key: tuple(value) for key, value in inc.items()}

    @cached_property
    def _inverses(self) -> Dict[str, str]:
        inverses = {}
        for f in self.mor_ids:
            x, y = self.morphisms[f]
            for g in self.hom(y, x):
                if (
                    self.compose.get((g, f)) == self.identity.get(x)
                    and self.compose.get((f, g)) == self.identity.get(y)
                ):
                    inverses[f] = g
                    break
        return inverses


class FinCatFactory:
    """
    A factory class for building FinCat instances.

    Methods:
    - build_entity(...) -> FinCat: Wraps explicit tables.
    - build_concrete(...) -> FinCat: Builds a category whose morphisms carry hashable payloads,
        composing payloads with a supplied function.
    - build_discrete(objects) -> FinCat
    - build_poset(objects, leq) -> FinCat
    - build_terminal() -> FinCat
    - build_walking_arrow() -> FinCat
    """

    @staticmethod
    def build_entity(
        objects: Iterable[str],
        morphisms: Dict[str, Tuple[str, str]],
        identity: Dict[str, str],
        compose: Dict[Tuple[str, str], str],
        name: str = "",
    ) -> FinCat:
        return FinCat(
            objects=tuple(objects),
            morphisms=dict(morphisms),
            identity=dict(identity),
            compose=dict(compose),
            name=name,
        )

    @classmethod
    def build_concrete(
        cls,
        objects: Iterable[str],
        arrows: Dict[str, Tuple[str, str, Hashable]],
        compose_payload: Callable[[Hashable, Hashable], Hashable],
        identity_payload: Callable[[str], Hashable],
        name: str = "",
    ) -> FinCat:
        """
        Builds a category from morphisms that carry payloads.

        Parameters:
        - arrows: identifier -> (dom, cod, payload). Payloads must be unique per (dom, cod).
        - compose_payload(g_payload, f_payload): payload of g∘f.
        - identity_payload(x): payload of the identity on x.

        Raises:
        - MalformedTable: If an identity or a composite payload has no arrow.
        """
        objects = tuple(objects)
        lookup = {(d, c, p): ident for ident, (d, c, p) in arrows.items()}

        def find(d, c, p) -> str:
            try:
                return lookup[(d, c, p)]
            except KeyError:
                raise MalformedTable(
                    item="missing-arrow",
                    message=f"{name}: no arrow {d} -> {c} with payload {p!r}",
                )

        identity = {x: find(x, x, identity_payload(x)) for x in objects}
        outgoing: Dict[str, List[str]] = {}
        for ident, (d, _, _) in arrows.items():
            outgoing.setdefault(d, []).append(ident)
        compose = {}
        for f, (x, y, fp) in arrows.items():
            for g in outgoing.get(y, ()):
                _, z, gp = arrows[g]
                compose[(g, f)] = find(x, z, compose_payload(gp, fp))
        return cls.build_entity(
            objects=objects,
            morphisms={ident: (d, c) for ident, (d, c, _) in arrows.items()},
            identity=identity,
            compose=compose,
            name=name,
        )

    @classmethod
    def build_discrete(cls, objects: Iterable[str], name: str = "") -> FinCat:
        objects = tuple(objects)
        ids = {x: f"1_{x}" for x in objects}
        return cls.build_entity(
            objects=objects,
            morphisms={ids[x]: (x, x) for x in objects},
            identity=ids,
            compose={(ids[x], ids[x]): ids[x] for x in objects},
            name=name or f"Disc{len(objects)}",
        )

    @classmethod
    def build_poset(
        cls, objects: Iterable[str], leq: Callable[[str, str], bool], name: str = ""
    ) -> FinCat:
        """Thin category with an arrow x -> y, named "x<=y", whenever leq(x, y)."""
        objects = tuple(objects)
        arrows = {
            f"{x}<={y}": (x, y, (x, y)) for x in objects for y in objects if leq(x, y)
        }
        return cls.build_concrete(
            objects,
            arrows,
            compose_payload=lambda g, f: (f[0], g[1]),
            identity_payload=lambda x: (x, x),
            name=name or "Poset",
        )

    @classmethod
    def build_terminal(cls) -> FinCat:
        return cls.build_discrete(["*"], name="1")

    @classmethod
    def build_walking_arrow(cls) -> FinCat:
        return cls.build_poset(["0", "1"], lambda x, y: x <= y, name="2")


# --------------------------------------------------
# FinFunctor Model
# --------------------------------------------------


@dataclass(frozen=True)
class FinFunctor:
    """
    A functor between finite categories, as object and morphism tables.

    Attributes:
    - source (FinCat), target (FinCat)
    - obj_map (Dict[str, str]): Object table.
    - mor_map (Dict[str, str]): Morphism table.
    - name (str): Display name; ignored by equality.
    """

    source: FinCat
    target: FinCat
    obj_map: Dict[str, str]
    mor_map: Dict[str, str]
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        name = self.name or "?"
        return f"FinFunctor({name}: {self.source.name} -> {self.target.name})"

    def obj(self, x: str) -> str:
        try:
            return self.obj_map[x]
        except KeyError:
            raise UnknownObject(
                item="unknown-object",
                message=f"{self.name}: {x!r} is outside the domain",
            )

    def mor(self, f: str) -> str:
        try:
            return self.mor_map[f]
        except KeyError:
            raise UnknownObject(
                item="unknown-morphism",
                message=f"{self.name}: {f!r} is outside the domain",
            )


class FinFunctorFactory:
    @staticmethod
    def build_entity(
        source: FinCat,
        target: FinCat,
        obj_map: Dict[str, str],
        mor_map: Dict[str, str],
        name: str = "",
    ) -> FinFunctor:
        return FinFunctor(
            source=source,
            target=target,
            obj_map=dict(obj_map),
            mor_map=dict(mor_map),
            name=name,
        )

    @classmethod
    def build_identity(cls, c: FinCat) -> FinFunctor:
        return cls.build_entity(
            c,
            c,
            {x: x for x in c.objects},
            {f: f for f in c.morphisms},
            name=f"1_{c.name}",
        )

    @classmethod
    def build_constant(cls, source: FinCat, target: FinCat, x: str) -> FinFunctor:
        ident = target.id(x)
        return cls.build_entity(
            source,
            target,
            {a: x for a in source.objects},
            {f: ident for f in source.morphisms},
            name=f"const_{x}",
        )


# --------------------------------------------------
# NatTrans Model
# --------------------------------------------------


@dataclass(frozen=True)
class NatTrans:
    """
    A natural transformation source_fun => target_fun, as a component table.

    Attributes:
    - source_fun (FinFunctor), target_fun (FinFunctor): Parallel functors.
    - components (Dict[str, str]): Object of the common source -> morphism of the common target.
    """

    source_fun: FinFunctor
    target_fun: FinFunctor
    components: Dict[str, str]
    name: str = field(default="", compare=False)

    def at(self, x: str) -> str:
        try:
            return self.components[x]
        except KeyError:
            raise MalformedTable(
                item="missing-component",
                message=f"{self.name}: no component at {x!r}",
            )


class NatTransFactory:
    @staticmethod
    def build_entity(
        source_fun: FinFunctor,
        target_fun: FinFunctor,
        components: Dict[str, str],
        name: str = "",
    ) -> NatTrans:
        return NatTrans(source_fun, target_fun, dict(components), name=name)

    @classmethod
    def build_identity(cls, functor: FinFunctor) -> NatTrans:
        return cls.build_entity(
            functor,
            functor,
            {x: functor.target.id(functor.obj(x)) for x in functor.source.objects},
            name=f"1_{functor.name}",
        )


# --------------------------------------------------
# Bifunctor Model
# --------------------------------------------------


@dataclass(frozen=True)
class Bifunctor:
    """
    A functor out of a full subcategory of left × right, stored as tables keyed by pairs.

    The domain is the set of defined object pairs; every morphism pair between defined
    pairs must have an image. Tensors and laxators in bounded universes are partial.

    Attributes:
    - left (FinCat), right (FinCat), target (FinCat)
    - obj_map (Dict[Tuple[str, str], str]): (a, b) -> object of target.
    - mor_map (Dict[Tuple[str, str], str]): (f, g) -> morphism of target.
    """

    left: FinCat
    right: FinCat
    target: FinCat
    obj_map: Dict[Tuple[str, str], str]
    mor_map: Dict[Tuple[str, str], str]
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"Bifunctor({self.name or '?'}: {len(self.obj_map)} pairs)"

    def defined(self, a: str, b: str) -> bool:
        return (a, b) in self.obj_map

    @property
    def is_total(self) -> bool:
        return len(self.obj_map) == len(self.left.objects) * len(self.right.objects)

    def obj(self, a: str, b: str) -> str:
        try:
            return self.obj_map[(a, b)]
        except KeyError:
            raise UnknownObject(
                item="undefined-tensor",
                message=f"{self.name}: ({a}, {b}) is outside the domain",
            )

    def mor(self, f: str, g: str) -> str:
        try:
            return self.mor_map[(f, g)]
        except KeyError:
            raise UnknownObject(
                item="undefined-tensor",
                message=f"{self.name}: ({f}, {g}) is outside the domain",
            )


class BifunctorFactory:
    @staticmethod
    def build_entity(
        left: FinCat,
        right: FinCat,
        target: FinCat,
        obj_map: Dict[Tuple[str, str], str],
        mor_map: Dict[Tuple[str, str], str],
        name: str = "",
    ) -> Bifunctor:
        return Bifunctor(left, right, target, dict(obj_map), dict(mor_map), name=name)

    @classmethod
    def build_from_functions(
        cls,
        left: FinCat,
        right: FinCat,
        target: FinCat,
        on_objects: Callable[[str, str], Optional[str]],
        on_morphisms: Callable[[str, str], str],
        name: str = "",
    ) -> Bifunctor:
        """
        Tabulates a bifunctor. on_objects returns None where the pair is undefined;
        on_morphisms is only called between defined pairs.
        """
        obj_map = {}
        for a in left.objects:
            for b in right.objects:
                value = on_objects(a, b)
                if value is not None:
                    obj_map[(a, b)] = value
        mor_map = {}
        for (a, b) in obj_map:
            for f in left.out_of(a):
                for g in right.out_of(b):
                    if (left.cod(f), right.cod(g)) in obj_map:
                        mor_map[(f, g)] = on_morphisms(f, g)
        return cls.build_entity(left, right, target, obj_map, mor_map, name=name)
