"""Wiring diagrams, Moore machines and the algebra of discrete dynamical systems."""

import logging
from itertools import product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

from django.conf import settings

from fibred.domain.fib.models import MonoidalFibrationData
from fibred.domain.fincat.models import (
    BifunctorFactory,
    FinCat,
    FinCatFactory,
    FinFunctorFactory,
)
from fibred.domain.groth.models import GrothResult
from fibred.domain.groth.services import GrothServices
from fibred.domain.indexed.models import (
    COVARIANT,
    IndexedCatFactory,
    LaxMonoidalIndexed,
    LaxMonoidalIndexedFactory,
)
from fibred.domain.moncat.models import MonoidalData, MonoidalFactory
from utils.data_manipulation.type_conversion import pair, unpair
from utils.django.exceptions import SizeLimitExceeded, TypeMismatch, UniverseOverflow

from .models import (
    INNER,
    OUTER,
    Box,
    MooreMachine,
    MooreMachineFactory,
    WiringDiagram,
    WiringDiagramFactory,
)

log = logging.getLogger(__name__)

MACHINE_LIMIT = 512


def _state_map(h: Sequence[int]) -> str:
    return "".join(map(str, h))


class DynamicsServices:
    """
    Methods:
    - identity_wiring(box) -> WiringDiagram
    - compose_wiring(second, first) -> WiringDiagram
    - tensor_box(x, y) -> Box
    - tensor_wiring(first, second) -> WiringDiagram
    - swap_wiring(x, y) -> WiringDiagram
    - wiring_category(types, port_bound) -> (FinCat, MonoidalData)
    - dds_apply(phi, m) -> MooreMachine
    - dds_parallel(m1, m2) -> MooreMachine
    - simulate(m, state, inputs) -> List[output word]
    - behaviorally_equivalent(m1, m2, depth) -> bool
    - machine_morphisms(m1, m2) -> List[state map]
    - dds_indexed(state_bound, port_bound, types) -> LaxMonoidalIndexed
    - dds_total_category(state_bound, port_bound, types) -> (GrothResult, MonoidalFibrationData)
    """

    # ----- Wiring diagrams

    @staticmethod
    def identity_wiring(box: Box) -> WiringDiagram:
        return WiringDiagram(
            box,
            box,
            tuple((OUTER, j) for j in range(len(box.inputs))),
            tuple(range(len(box.outputs))),
        )

    @staticmethod
    def compose_wiring(second: WiringDiagram, first: WiringDiagram) -> WiringDiagram:
        """
        ψ∘φ for φ: X -> Y and ψ: Y -> Z. An inner input fed by an outer port of Y is
        rerouted through ψ, and every output of Z is traced back through φ_out.

        Raises:
        - TypeMismatch: If the outer box of φ is not the inner box of ψ.
        """
        if first.outer != second.inner:
            raise TypeMismatch(
                item="wiring-composition",
                message=f"{first.outer.ident} is not {second.inner.ident}",
            )
        feed_in = []
        for side, j in first.feed_in:
            if side == INNER:
                feed_in.append((INNER, j))
                continue
            side2, k = second.feed_in[j]
            feed_in.append((INNER, first.feed_out[k]) if side2 == INNER else (OUTER, k))
        feed_out = tuple(first.feed_out[k] for k in second.feed_out)
        return WiringDiagram(first.inner, second.outer, tuple(feed_in), feed_out)

    @staticmethod
    def tensor_box(x: Box, y: Box) -> Box:
        return Box(x.inputs + y.inputs, x.outputs + y.outputs)

    @classmethod
    def tensor_wiring(
        cls, first: WiringDiagram, second: WiringDiagram
    ) -> WiringDiagram:
        """Parallel placement; the ports of the second diagram are shifted past the first."""
        inner_shift = len(first.inner.outputs)
        outer_shift = len(first.outer.inputs)
        feed_in = first.feed_in + tuple(
            (side, j + (inner_shift if side == INNER else outer_shift))
            for side, j in second.feed_in
        )
        feed_out = first.feed_out + tuple(j + inner_shift for j in second.feed_out)
        return WiringDiagram(
            cls.tensor_box(first.inner, second.inner),
            cls.tensor_box(first.outer, second.outer),
            feed_in,
            feed_out,
        )

    @classmethod
    def swap_wiring(cls, x: Box, y: Box) -> WiringDiagram:
        """The symmetry X⊗Y -> Y⊗X."""
        xi, yi = len(x.inputs), len(y.inputs)
        xo, yo = len(x.outputs), len(y.outputs)
        feed_in = tuple((OUTER, yi + p) for p in range(xi)) + tuple(
            (OUTER, p) for p in range(yi)
        )
        feed_out = tuple(xo + q for q in range(yo)) + tuple(range(xo))
        return WiringDiagram(
            cls.tensor_box(x, y), cls.tensor_box(y, x), feed_in, feed_out
        )

    @staticmethod
    def boxes(types: Sequence[int], port_bound: int) -> List[Box]:
        words = [
            word
            for n in range(port_bound + 1)
            for word in cartesian(sorted(set(types)), repeat=n)
        ]
        return [Box(tuple(i), tuple(o)) for i in words for o in words]

    @staticmethod
    def wirings(inner: Box, outer: Box) -> List[WiringDiagram]:
        """Every type-respecting wiring diagram from inner to outer."""
        feeders = [
            [(INNER, j) for j, t in enumerate(inner.outputs) if t == wanted]
            + [(OUTER, j) for j, t in enumerate(outer.inputs) if t == wanted]
            for wanted in inner.inputs
        ]
        sources = [
            [j for j, t in enumerate(inner.outputs) if t == wanted]
            for wanted in outer.outputs
        ]
        return [
            WiringDiagramFactory.build_entity(inner, outer, feed_in, feed_out)
            for feed_in in cartesian(*feeders)
            for feed_out in cartesian(*sources)
        ]

    @classmethod
    def wiring_category(
        cls, types: Sequence[int] = (2,), port_bound: Optional[int] = None
    ) -> Tuple[FinCat, MonoidalData]:
        """
        Boxes with at most port_bound inputs and outputs, typed from types, and all
        wiring diagrams between them. Parallel placement is a strict symmetric tensor,
        defined while the placed box stays within the port bound.
        """
        w, monoidal, _, _ = cls._wiring_universe(types, port_bound)
        return w, monoidal

    @classmethod
    def _wiring_universe(cls, types: Sequence[int], port_bound: Optional[int]):
        port_bound = settings.PORT_BOUND if port_bound is None else port_bound
        boxes = {box.ident: box for box in cls.boxes(types, port_bound)}
        diagrams = {}
        arrows = {}
        for inner in boxes.values():
            for outer in boxes.values():
                for phi in cls.wirings(inner, outer):
                    diagrams[phi.ident] = phi
                    arrows[phi.ident] = (inner.ident, outer.ident, phi)
        w = FinCatFactory.build_concrete(
            list(boxes),
            arrows,
            compose_payload=cls.compose_wiring,
            identity_payload=lambda x: cls.identity_wiring(boxes[x]),
            name=f"W{port_bound}",
        )

        def fits(box: Box) -> bool:
            return len(box.inputs) <= port_bound and len(box.outputs) <= port_bound

        def on_objects(x: str, y: str) -> Optional[str]:
            box = cls.tensor_box(boxes[x], boxes[y])
            return box.ident if fits(box) else None

        def on_morphisms(f: str, g: str) -> str:
            return cls.tensor_wiring(diagrams[f], diagrams[g]).ident

        tensor = BifunctorFactory.build_from_functions(
            w, w, w, on_objects, on_morphisms, name="∥"
        )
        braiding = {
            (x, y): cls.swap_wiring(boxes[x], boxes[y]).ident
            for (x, y) in tensor.obj_map
        }
        monoidal = MonoidalFactory.build_strict(
            w,
            tensor,
            Box().ident,
            braiding=braiding,
            symmetric=True,
            name=f"({w.name}, ∥)",
        )
        log.debug("wiring category: %d boxes, %d diagrams", len(boxes), len(arrows))
        return w, monoidal, boxes, diagrams

    # ----- Machines

    @staticmethod
    def dds_apply(phi: WiringDiagram, m: MooreMachine) -> MooreMachine:
        """
        The machine on the outer box: outputs are read through φ_out, and each inner
        input is fed from an outer input or from the current inner readout per φ_in.

        Raises:
        - TypeMismatch: If m does not live on the inner box of φ.
        """
        if m.box != phi.inner:
            raise TypeMismatch(
                item="dds-box",
                message=f"{m.ident} lives on {m.box.ident}, not {phi.inner.ident}",
            )

        def update(s: int, word: Tuple[int, ...]) -> int:
            readout = m.read(s)
            inner = tuple(
                readout[j] if side == INNER else word[j] for side, j in phi.feed_in
            )
            return m.step(s, inner)

        def readout(s: int) -> Tuple[int, ...]:
            return tuple(m.read(s)[j] for j in phi.feed_out)

        return MooreMachineFactory.build_from_functions(
            phi.outer, m.states, update, readout
        )

    @classmethod
    def dds_parallel(cls, m1: MooreMachine, m2: MooreMachine) -> MooreMachine:
        """Product machine on the parallel box; state (s1, s2) is s1 * |S2| + s2."""
        split = len(m1.box.inputs)
        k2 = m2.states

        def update(s: int, word: Tuple[int, ...]) -> int:
            s1, s2 = divmod(s, k2)
            return m1.step(s1, word[:split]) * k2 + m2.step(s2, word[split:])

        def readout(s: int) -> Tuple[int, ...]:
            s1, s2 = divmod(s, k2)
            return m1.read(s1) + m2.read(s2)

        return MooreMachineFactory.build_from_functions(
            cls.tensor_box(m1.box, m2.box), m1.states * k2, update, readout
        )

    @staticmethod
    def unit_machine() -> MooreMachine:
        return MooreMachineFactory.build_entity(Box(), 1, [0], [()])

    @staticmethod
    def simulate(
        m: MooreMachine, state: int, inputs: Sequence[Tuple[int, ...]]
    ) -> List[Tuple[int, ...]]:
        """Readouts of the run from state, one more than the number of inputs."""
        stream = [m.read(state)]
        for word in inputs:
            state = m.step(state, tuple(word))
            stream.append(m.read(state))
        return stream

    @staticmethod
    def behaviour_classes(m1: MooreMachine, m2: MooreMachine, depth: int):
        """
        Partitions the states of both machines by their readout streams on all input
        words of length at most depth. Returns the class of each state of each machine.
        """
        states = [(0, s) for s in range(m1.states)] + [(1, s) for s in range(m2.states)]
        machines = (m1, m2)
        words = m1.box.input_words
        classes = {p: machines[p[0]].read(p[1]) for p in states}
        for _ in range(depth):
            signature = {
                (i, s): (
                    classes[(i, s)],
                    tuple(classes[(i, machines[i].step(s, word))] for word in words),
                )
                for (i, s) in states
            }
            ordered = sorted(set(signature.values()), key=repr)
            names = {sig: n for n, sig in enumerate(ordered)}
            refined = {p: names[signature[p]] for p in states}
            if len(set(refined.values())) == len(set(classes.values())):
                classes = refined
                break
            classes = refined
        return (
            [classes[(0, s)] for s in range(m1.states)],
            [classes[(1, s)] for s in range(m2.states)],
        )

    @classmethod
    def behaviorally_equivalent(
        cls, m1: MooreMachine, m2: MooreMachine, depth: Optional[int] = None
    ) -> bool:
        """
        Whether every state of either machine has a state of the other with the same
        readout stream on all input words up to depth. The depth defaults to the larger
        of the configured floor and 2·|S1|·|S2|.
        """
        if m1.box != m2.box:
            return False
        if depth is None:
            depth = max(settings.BEHAVIOUR_DEPTH, 2 * m1.states * m2.states)
        first, second = cls.behaviour_classes(m1, m2, depth)
        return set(first) == set(second)

    @staticmethod
    def machine_morphisms(m1: MooreMachine, m2: MooreMachine) -> List[Tuple[int, ...]]:
        """State maps h with h∘update1 = update2∘(h × 1) and readout2∘h = readout1."""
        if m1.box != m2.box:
            return []
        found = []
        for h in cartesian(range(m2.states), repeat=m1.states):
            if all(m2.read(h[s]) == m1.read(s) for s in range(m1.states)) and all(
                h[m1.step(s, word)] == m2.step(h[s], word)
                for s in range(m1.states)
                for word in m1.box.input_words
            ):
                found.append(h)
        return found

    @classmethod
    def machines(cls, box: Box, state_bound: int) -> List[MooreMachine]:
        """
        Raises:
        - SizeLimitExceeded: Above MACHINE_LIMIT machines on the box.
        """
        inputs, outputs = len(box.input_words), len(box.output_words)
        count = sum(
            n ** (n * inputs) * outputs**n for n in range(1, state_bound + 1)
        )
        if count > MACHINE_LIMIT:
            raise SizeLimitExceeded(
                item="dds-fibre",
                message=f"{count} machines on {box.ident} with {state_bound} states",
            )
        found = []
        for n in range(1, state_bound + 1):
            for update in cartesian(range(n), repeat=n * inputs):
                for readout in cartesian(box.output_words, repeat=n):
                    found.append(
                        MooreMachineFactory.build_entity(box, n, update, readout)
                    )
        return found

    @classmethod
    def dds_fibre(
        cls, box: Box, state_bound: int
    ) -> Tuple[FinCat, Dict[str, MooreMachine]]:
        """Machines on box with their morphisms; a morphism is named (m1|m2|h)."""
        machines = {m.ident: m for m in cls.machines(box, state_bound)}
        arrows = {}
        for m1 in machines.values():
            for m2 in machines.values():
                for h in cls.machine_morphisms(m1, m2):
                    arrows[pair(m1.ident, m2.ident, _state_map(h))] = (
                        m1.ident, m2.ident, h
                    )
        fibre = FinCatFactory.build_concrete(
            list(machines),
            arrows,
            compose_payload=lambda g, f: tuple(g[s] for s in f),
            identity_payload=lambda x: tuple(range(machines[x].states)),
            name=f"DDS({box.ident})",
        )
        return fibre, machines

    @classmethod
    def dds_indexed(
        cls,
        state_bound: Optional[int] = None,
        port_bound: Optional[int] = None,
        types: Sequence[int] = (2,),
    ) -> LaxMonoidalIndexed:
        """
        Box ↦ machines with at most state_bound states, wiring ↦ dds_apply, with parallel
        composition as laxator. The laxator is partial where the state product exceeds
        the bound.

        Raises:
        - SizeLimitExceeded: If a fibre has more than MACHINE_LIMIT machines.
        - UniverseOverflow: If a wiring action leaves the universe.
        """
        state_bound = settings.STATE_BOUND if state_bound is None else state_bound
        w, monoidal, boxes, diagrams = cls._wiring_universe(types, port_bound)
        fibres, machines = {}, {}
        for x, box in boxes.items():
            fibres[x], machines[x] = cls.dds_fibre(box, state_bound)

        reindex = {}
        for phi_id, (x, y) in w.morphisms.items():
            phi = diagrams[phi_id]
            obj_map = {}
            for ident, m in machines[x].items():
                image = cls.dds_apply(phi, m).ident
                if image not in machines[y]:
                    raise UniverseOverflow(
                        item="wiring-action",
                        message=f"{phi_id} sends {ident} outside DDS({y})",
                    )
                obj_map[ident] = image
            mor_map = {}
            for k in fibres[x].morphisms:
                m1, m2, h = unpair(k)
                mor_map[k] = pair(obj_map[m1], obj_map[m2], h)
            reindex[phi_id] = FinFunctorFactory.build_entity(
                fibres[x], fibres[y], obj_map, mor_map, name=f"DDS({phi_id})"
            )
        carrier = IndexedCatFactory.build_strict(
            w, COVARIANT, fibres, reindex, name="DDS"
        )

        def laxator(x: str, y: str, xy: str):
            def on_objects(a: str, b: str) -> Optional[str]:
                m = cls.dds_parallel(machines[x][a], machines[y][b])
                return m.ident if m.ident in machines[xy] else None

            def on_morphisms(k: str, l: str) -> str:
                a1, a2, h1 = unpair(k)
                b1, b2, h2 = unpair(l)
                k2, k2_target = machines[y][b1].states, machines[y][b2].states
                h = tuple(
                    int(h1[s // k2]) * k2_target + int(h2[s % k2])
                    for s in range(machines[x][a1].states * k2)
                )
                return pair(on_objects(a1, b1), on_objects(a2, b2), _state_map(h))

            return BifunctorFactory.build_from_functions(
                fibres[x],
                fibres[y],
                fibres[xy],
                on_objects,
                on_morphisms,
                name=f"∥_{x},{y}",
            )

        l = LaxMonoidalIndexedFactory.build_strict(
            carrier,
            monoidal,
            {
                (x, y): laxator(x, y, xy)
                for (x, y), xy in monoidal.tensor.obj_map.items()
            },
            cls.unit_machine().ident,
            braided=False,
            name="(DDS, ∥)",
        )
        log.debug(
            "DDS: %d boxes, %d machines",
            len(w.objects),
            sum(len(f.objects) for f in fibres.values()),
        )
        return l

    @classmethod
    def dds_total_category(
        cls,
        state_bound: Optional[int] = None,
        port_bound: Optional[int] = None,
        types: Sequence[int] = (2,),
    ) -> Tuple[GrothResult, MonoidalFibrationData]:
        return GrothServices.monoidal_total(
            cls.dds_indexed(state_bound, port_bound, types)
        )
