from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from itertools import product as cartesian
from typing import Dict, FrozenSet, Iterable, Tuple

from dataclass_type_validator import dataclass_validate

from fibred.domain.fincat.models import FinCat, FinCatFactory
from fibred.domain.moncat.models import CocartesianWitness
from fibred.domain.moncat.services import CocartesianWitnessFactory
from utils.django.exceptions import MalformedTable, TypeMismatch


def function_id(m: int, n: int, images: Tuple[int, ...]) -> str:
    """Identifier of a function m -> n in the skeleton, e.g. "2>3:02"."""
    return f"{m}>{n}:" + "".join(str(i) for i in images)


# --------------------------------------------------
# FinSetSkeleton Model
# --------------------------------------------------


@dataclass_validate(before_post_init=True)
@dataclass(frozen=True)
class FinSetSkeleton:
    """
    The skeleton of finite sets {0, ..., bound} with all functions.

    Attributes:
    - bound (int): The largest cardinality in the universe.

    Note:
    - Coproducts are m+n with left-offset injections and exist only when m+n <= bound,
        so the witness is partial.
    """

    bound: int

    def __post_init__(self):
        if not 0 <= self.bound <= 9:
            raise ValueError("FinSet bound must lie in 0..9")

    @cached_property
    def category(self) -> FinCat:
        sizes = range(self.bound + 1)
        arrows = {}
        for m in sizes:
            for n in sizes:
                for images in cartesian(range(n), repeat=m):
                    arrows[function_id(m, n, images)] = (str(m), str(n), images)
        return FinCatFactory.build_concrete(
            [str(n) for n in sizes],
            arrows,
            compose_payload=lambda g, f: tuple(g[i] for i in f),
            identity_payload=lambda x: tuple(range(int(x))),
            name=f"FinSet{self.bound}",
        )

    @cached_property
    def witness(self) -> CocartesianWitness:
        coproducts = {}
        for m in range(self.bound + 1):
            for n in range(self.bound + 1 - m):
                s = m + n
                coproducts[(str(m), str(n))] = (
                    str(s),
                    function_id(m, s, tuple(range(m))),
                    function_id(n, s, tuple(range(m, s))),
                )
        return CocartesianWitnessFactory.build_entity(
            self.category, coproducts, "0", name=f"FinSet{self.bound}+"
        )

    def function(self, m: int, n: int, images) -> str:
        return function_id(m, n, tuple(images))


def function_images(ident: str) -> Tuple[int, ...]:
    """Images of a skeleton function from its identifier: "2>3:02" -> (0, 2)."""
    return tuple(int(i) for i in ident.split(":", 1)[1])


def subset_id(atoms: Iterable[str]) -> str:
    return "{" + ",".join(sorted(atoms)) + "}"


def subset_atoms(ident: str) -> FrozenSet[str]:
    body = ident[1:-1]
    return frozenset(body.split(",")) if body else frozenset()


# --------------------------------------------------
# Decorator Model
# --------------------------------------------------

SIMPLE_GRAPH = "simple-graph"
MARKED_VERTEX = "marked-vertex"
DECORATOR_KINDS = (SIMPLE_GRAPH, MARKED_VERTEX)


@dataclass(frozen=True)
class Decorator:
    """
    A lax monoidal functor F: (FinSet, +) -> (Set, ×), truncated to a skeleton.

    Decorations are sets of atoms: edges "ij" of a simple graph on n, or marked vertices
    "i". F(f) pushes atoms forward and φ_{m,n} places the second decoration after the
    first.

    Attributes:
    - bound (int): Largest n with F(n) tabulated; act and phi work beyond it.
    - kind (str): One of DECORATOR_KINDS.
    - values (Dict[str, Tuple[str, ...]]): n -> F(n).
    """

    bound: int
    kind: str
    values: Dict[str, Tuple[str, ...]]
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"Decorator({self.name})"

    def atoms(self, n: int) -> Tuple[str, ...]:
        if self.kind == SIMPLE_GRAPH:
            return tuple(f"{i}{j}" for i in range(n) for j in range(n))
        return tuple(str(i) for i in range(n))

    def act(self, f: str, d: str) -> str:
        """F(f)(d): each vertex i of an atom becomes f(i)."""
        images = function_images(f)
        return subset_id(
            {"".join(str(images[int(v)]) for v in atom) for atom in subset_atoms(d)}
        )

    def phi(self, m: int, d1: str, d2: str) -> str:
        """φ_{m,n}(d1, d2): d2 shifted past the m vertices of d1."""
        shifted = ("".join(str(int(v) + m) for v in atom) for atom in subset_atoms(d2))
        return subset_id(subset_atoms(d1) | set(shifted))

    @property
    def unit(self) -> str:
        return subset_id(())


class DecoratorFactory:
    @staticmethod
    def build_entity(bound: int, kind: str, name: str = "") -> Decorator:
        if kind not in DECORATOR_KINDS:
            raise MalformedTable(
                item="unknown-decorator",
                message=f"{kind!r} is not one of {DECORATOR_KINDS}",
            )
        draft = Decorator(bound, kind, {})
        values = {}
        for n in range(bound + 1):
            atoms = draft.atoms(n)
            values[str(n)] = tuple(
                sorted(
                    subset_id(chosen)
                    for r in range(len(atoms) + 1)
                    for chosen in combinations(atoms, r)
                )
            )
        return Decorator(bound, kind, values, name=name or f"{kind}≤{bound}")


# --------------------------------------------------
# NetworkModel Model
# --------------------------------------------------


@dataclass(frozen=True)
class ConstituentMonoid:
    """
    The monoid F(n) with a·b = F(∇_n) φ_{n,n}(a, b) and unit F(!_n) φ_0.

    Attributes:
    - n (str)
    - elements (Tuple[str, ...])
    - product (Dict[Tuple[str, str], str])
    - unit (str)
    """

    n: str
    elements: Tuple[str, ...]
    product: Dict[Tuple[str, str], str]
    unit: str

    def mul(self, a: str, b: str) -> str:
        return self.product[(a, b)]


@dataclass(frozen=True)
class NetworkModel:
    decorator: Decorator
    monoids: Dict[str, ConstituentMonoid]
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"NetworkModel({self.name})"


# --------------------------------------------------
# Box, WiringDiagram and MooreMachine Models
# --------------------------------------------------


@dataclass(frozen=True)
class Box:
    """
    A box with typed ports. A type is a finite set {0..t-1}, given by its size t.

    Attributes:
    - inputs (Tuple[int, ...]): Types of the input ports, in port order.
    - outputs (Tuple[int, ...]): Types of the output ports, in port order.
    """

    inputs: Tuple[int, ...] = ()
    outputs: Tuple[int, ...] = ()

    @property
    def ident(self) -> str:
        return "in:" + ",".join(map(str, self.inputs)) + ";out:" + ",".join(
            map(str, self.outputs)
        )

    @cached_property
    def input_words(self) -> Tuple[Tuple[int, ...], ...]:
        """∏ of the input types, ordered by port."""
        return tuple(cartesian(*(range(t) for t in self.inputs)))

    @cached_property
    def output_words(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(cartesian(*(range(t) for t in self.outputs)))

    @cached_property
    def _input_index(self) -> Dict[Tuple[int, ...], int]:
        return {word: i for i, word in enumerate(self.input_words)}

    def input_index(self, word: Tuple[int, ...]) -> int:
        return self._input_index[tuple(word)]


INNER = "x"
OUTER = "y"


@dataclass(frozen=True)
class WiringDiagram:
    """
    A wiring diagram φ: X -> Y placing the inner box X inside the outer box Y.

    Attributes:
    - inner (Box), outer (Box)
    - feed_in (Tuple[Tuple[str, int], ...]): Per inner input port, its feeder:
        (INNER, j) for inner output j or (OUTER, j) for outer input j.
    - feed_out (Tuple[int, ...]): Per outer output port, the inner output feeding it.
    """

    inner: Box
    outer: Box
    feed_in: Tuple[Tuple[str, int], ...]
    feed_out: Tuple[int, ...]

    @property
    def ident(self) -> str:
        routes = ",".join(f"{side}{j}" for side, j in self.feed_in)
        outs = ",".join(map(str, self.feed_out))
        return f"[{self.inner.ident}>{self.outer.ident}|{routes}|{outs}]"


class WiringDiagramFactory:
    @staticmethod
    def build_entity(
        inner: Box, outer: Box, feed_in: Iterable[Tuple[str, int]], feed_out: Iterable[
            int
        ]
    ) -> WiringDiagram:
        """
        Raises:
        - MalformedTable: If a routing table is not total or points at a missing port.
        - TypeMismatch: If a port is fed by a port of another type.
        """
        feed_in = tuple((side, int(j)) for side, j in feed_in)
        feed_out = tuple(int(j) for j in feed_out)
        if len(feed_in) != len(inner.inputs) or len(feed_out) != len(outer.outputs):
            raise MalformedTable(
                item="wiring-shape",
                message=f"{inner.ident} -> {outer.ident} needs {len(inner.inputs)} "
                f"feeders and {len(outer.outputs)} outer sources",
            )
        sources = {INNER: inner.outputs, OUTER: outer.inputs}
        for port, (side, j) in enumerate(feed_in):
            if side not in sources or not 0 <= j < len(sources[side]):
                raise MalformedTable(
                    item="wiring-port", message=f"no port {side}{j} feeds input {port}"
                )
            if sources[side][j] != inner.inputs[port]:
                raise TypeMismatch(
                    item="wiring-type",
                    message=f"{side}{j} has type {sources[side][j]}, "
                    f"input {port} has type {inner.inputs[port]}",
                )
        for port, j in enumerate(feed_out):
            if not 0 <= j < len(inner.outputs):
                raise MalformedTable(
                    item="wiring-port",
                    message=f"no inner output {j} feeds output {port}",
                )
            if inner.outputs[j] != outer.outputs[port]:
                raise TypeMismatch(
                    item="wiring-type",
                    message=f"inner output {j} has type {inner.outputs[j]}, "
                    f"outer output {port} has type {outer.outputs[port]}",
                )
        return WiringDiagram(inner, outer, feed_in, feed_out)


@dataclass(frozen=True)
class MooreMachine:
    """
    A Moore machine on a box, with states 0..states-1.

    Attributes:
    - box (Box)
    - states (int)
    - update (Tuple[int, ...]): update[s * |inputs| + i], i the index of the input word.
    - readout (Tuple[Tuple[int, ...], ...]): Output word per state.
    """

    box: Box
    states: int
    update: Tuple[int, ...]
    readout: Tuple[Tuple[int, ...], ...]

    @property
    def ident(self) -> str:
        update = "".join(map(str, self.update))
        readout = ".".join("".join(map(str, word)) for word in self.readout)
        return f"<{self.states}:{update}:{readout}>"

    def step(self, s: int, word: Tuple[int, ...]) -> int:
        return self.update[s * len(self.box.input_words) + self.box.input_index(word)]

    def read(self, s: int) -> Tuple[int, ...]:
        return self.readout[s]


class MooreMachineFactory:
    @staticmethod
    def build_entity(
        box: Box, states: int, update: Iterable[int], readout: Iterable[Iterable[int]]
    ) -> MooreMachine:
        update, readout = tuple(update), tuple(tuple(word) for word in readout)
        if len(update) != states * len(box.input_words) or len(readout) != states:
            raise MalformedTable(
                item="machine-shape",
                message=f"{states} states on {box.ident} need "
                f"{states * len(box.input_words)} updates and {states} readouts",
            )
        if any(not 0 <= s < states for s in update):
            raise MalformedTable(
                item="machine-state", message="update leaves the states"
            )
        for word in readout:
            if len(word) != len(box.outputs) or any(
                not 0 <= v < t for v, t in zip(word, box.outputs)
            ):
                raise TypeMismatch(
                    item="machine-readout",
                    message=f"{word} is not an output of {box.ident}",
                )
        return MooreMachine(box, states, update, readout)

    @classmethod
    def build_from_functions(
        cls, box: Box, states: int, update, readout
    ) -> MooreMachine:
        """Tabulates update(s, word) and readout(s)."""
        return cls.build_entity(
            box,
            states,
            [update(s, word) for s in range(states) for word in box.input_words],
            [readout(s) for s in range(states)],
        )
