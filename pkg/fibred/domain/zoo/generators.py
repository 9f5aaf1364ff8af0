"""Seeded generators of boxes, wiring diagrams and Moore machines."""

import random
from typing import Optional, Sequence, Tuple

from django.conf import settings

from .models import (
    INNER,
    OUTER,
    Box,
    MooreMachine,
    MooreMachineFactory,
    WiringDiagram,
    WiringDiagramFactory,
)


def random_box(
    rng: random.Random, port_bound: Optional[int] = None, types: Sequence[int] = (2,)
) -> Box:
    port_bound = settings.PORT_BOUND if port_bound is None else port_bound
    return Box(
        tuple(rng.choice(types) for _ in range(rng.randint(0, port_bound))),
        tuple(rng.choice(types) for _ in range(rng.randint(0, port_bound))),
    )


def random_machine(rng: random.Random, box: Box, max_states: int = 3) -> MooreMachine:
    states = rng.randint(1, max_states)
    return MooreMachineFactory.build_from_functions(
        box,
        states,
        lambda s, word: rng.randrange(states),
        lambda s: tuple(rng.randrange(t) for t in box.outputs),
    )


def random_wiring(
    rng: random.Random,
    inner: Box,
    port_bound: Optional[int] = None,
    types: Sequence[int] = (2,),
) -> WiringDiagram:
    """
    A wiring diagram out of inner into a random outer box. Outer outputs only take
    types the inner box produces, and an outer input is added for every inner input
    that would otherwise have no feeder.
    """
    port_bound = settings.PORT_BOUND if port_bound is None else port_bound
    produced = sorted(set(inner.outputs))
    outputs = (
        tuple(rng.choice(produced) for _ in range(rng.randint(0, port_bound)))
        if produced
        else ()
    )
    inputs = [rng.choice(types) for _ in range(rng.randint(0, port_bound))]
    for wanted in inner.inputs:
        if wanted not in inner.outputs and wanted not in inputs:
            inputs.append(wanted)
    outer = Box(tuple(inputs), outputs)
    feed_in = []
    for wanted in inner.inputs:
        feeders = [(INNER, j) for j, t in enumerate(inner.outputs) if t == wanted]
        feeders += [(OUTER, j) for j, t in enumerate(outer.inputs) if t == wanted]
        feed_in.append(rng.choice(feeders))
    feed_out = [
        rng.choice([j for j, t in enumerate(inner.outputs) if t == wanted])
        for wanted in outer.outputs
    ]
    return WiringDiagramFactory.build_entity(inner, outer, feed_in, feed_out)


def random_wired_machine(
    rng: random.Random, max_states: int = 3, port_bound: int = 2
) -> Tuple[MooreMachine, WiringDiagram, WiringDiagram]:
    """A machine with two composable wiring diagrams φ: X -> Y and ψ: Y -> Z."""
    box = random_box(rng, port_bound)
    m = random_machine(rng, box, max_states)
    phi = random_wiring(rng, box, port_bound)
    psi = random_wiring(rng, phi.outer, port_bound)
    return m, phi, psi


def toggle_machine() -> MooreMachine:
    """Two states on one binary input and output: update(s, i) = not i, readout s."""
    return MooreMachineFactory.build_from_functions(
        Box((2,), (2,)), 2, lambda s, word: 1 - word[0], lambda s: (s,)
    )


def feedback_wiring(box: Box) -> WiringDiagram:
    """Feeds the single output of box back into its single input and exposes it."""
    return WiringDiagramFactory.build_entity(
        box, Box((), box.outputs), [(INNER, 0)], [0]
    )
