"""Seeded generators of small categories for property suites and the --seed flag."""

import random
from typing import Optional

from django.conf import settings

from .models import FinCat, FinCatFactory
from .services import FinCatServices


def random_poset(rng: random.Random, n: int, density: float = 0.4) -> FinCat:
    """A random partial order on "0".."n-1", refining the numeric order."""
    below = {i: {i} for i in range(n)}
    for j in range(n):
        for i in range(j):
            if rng.random() < density:
                below[j] |= below[i]
    return FinCatFactory.build_poset(
        [str(i) for i in range(n)],
        lambda x, y: int(x) in below[int(y)],
        name=f"P{n}",
    )


def cyclic_group(k: int) -> FinCat:
    """The group Z/k as a one-object category with morphisms "r0".."r{k-1}"."""
    arrows = {f"r{i}": ("*", "*", i) for i in range(k)}
    return FinCatFactory.build_concrete(
        ["*"],
        arrows,
        compose_payload=lambda g, f: (g + f) % k,
        identity_payload=lambda _: 0,
        name=f"Z{k}",
    )


def random_category(
    rng: random.Random,
    max_objects: Optional[int] = None,
    max_morphisms: Optional[int] = None,
) -> FinCat:
    """
    A random poset, multiplied with a cyclic group when the morphism cap leaves room.

    The group factor supplies non-identity isomorphisms and parallel morphisms.
    """
    max_objects = max_objects or settings.GENERATOR_MAX_OBJECTS
    max_morphisms = max_morphisms or settings.GENERATOR_MAX_MORPHISMS
    while True:
        poset = random_poset(rng, rng.randint(1, max_objects), rng.random() * 0.6)
        if len(poset.morphisms) <= max_morphisms:
            break
    room = [k for k in (1, 2, 3) if len(poset.morphisms) * k <= max_morphisms]
    k = rng.choice(room)
    if k == 1:
        return poset
    return FinCatServices.product(poset, cyclic_group(k))
