"""Seeded generators of indexed categories and lax monoidal structure on them."""

import random
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from fibred.domain.fib.models import ClovenFibration
from fibred.domain.fincat.generators import cyclic_group, random_category
from fibred.domain.fincat.models import (
    BifunctorFactory,
    FinCat,
    FinCatFactory,
    FinFunctor,
    FinFunctorFactory,
    NatTransFactory,
)
from fibred.domain.fincat.services import FinCatServices, FinFunctorServices
from fibred.domain.groth.services import GrothServices
from fibred.domain.moncat.models import CocartesianWitness
from fibred.domain.moncat.services import CocartesianWitnessFactory
from utils.data_manipulation.type_conversion import pair, unpair

from .models import (
    CONTRAVARIANT,
    COVARIANT,
    IndexedCat,
    IndexedCatFactory,
    LaxMonoidalIndexed,
    LaxMonoidalIndexedFactory,
)

# ----- Slices and coslices


def _over(c: FinCat, x: str) -> Tuple[FinCat, Dict[str, Tuple[str, str]]]:
    """C/x, with each morphism identifier mapped to its (k, b) description."""
    parts = {}
    for b in c.into(x):
        for k in c.into(c.dom(b)):
            parts[pair(k, b)] = (k, b)
    morphisms = {m: (c.comp(b, k), b) for m, (k, b) in parts.items()}
    compose = {}
    for g, (kg, target) in parts.items():
        for f, (kf, b) in parts.items():
            if b == morphisms[g][0]:
                compose[(g, f)] = pair(c.comp(kg, kf), target)
    cat = FinCatFactory.build_entity(
        objects=c.into(x),
        morphisms=morphisms,
        identity={a: pair(c.id(c.dom(a)), a) for a in c.into(x)},
        compose=compose,
        name=f"{c.name}/{x}",
    )
    return cat, parts


def _under(c: FinCat, x: str) -> Tuple[FinCat, Dict[str, Tuple[str, str]]]:
    """x/C, a morphism (b, k): a -> b has k∘a = b."""
    parts = {}
    for a in c.out_of(x):
        for k in c.out_of(c.cod(a)):
            parts[pair(a, k)] = (a, k)
    morphisms = {m: (a, c.comp(k, a)) for m, (a, k) in parts.items()}
    compose = {}
    for g, (b, kg) in parts.items():
        for f, (a, kf) in parts.items():
            if morphisms[f][1] == b:
                compose[(g, f)] = pair(a, c.comp(kg, kf))
    cat = FinCatFactory.build_entity(
        objects=c.out_of(x),
        morphisms=morphisms,
        identity={a: pair(a, c.id(c.cod(a))) for a in c.out_of(x)},
        compose=compose,
        name=f"{x}/{c.name}",
    )
    return cat, parts


def slice_indexed(c: FinCat, variance: str = COVARIANT) -> IndexedCat:
    """
    Covariant: x ↦ C/x with post-composition. Contravariant: x ↦ x/C with
    pre-composition. Both compose on the nose.
    """
    if variance == COVARIANT:
        fibres = {x: _over(c, x) for x in c.objects}
    else:
        fibres = {x: _under(c, x) for x in c.objects}
    reindex = {}
    for f, (x, y) in c.morphisms.items():
        if variance == COVARIANT:
            (source, parts), (target, _) = fibres[x], fibres[y]
            obj_map = {a: c.comp(f, a) for a in source.objects}
            mor_map = {m: pair(k, c.comp(f, b)) for m, (k, b) in parts.items()}
        else:
            (source, parts), (target, _) = fibres[y], fibres[x]
            obj_map = {a: c.comp(a, f) for a in source.objects}
            mor_map = {m: pair(c.comp(a, f), k) for m, (a, k) in parts.items()}
        reindex[f] = FinFunctorFactory.build_entity(
            source, target, obj_map, mor_map, name=f"M{f}"
        )
    return IndexedCatFactory.build_strict(
        c,
        variance,
        {x: cat for x, (cat, _) in fibres.items()},
        reindex,
        name=f"{c.name}/-" if variance == COVARIANT else f"-/{c.name}",
    )


def random_strict_indexed(
    rng: random.Random,
    variance: str = CONTRAVARIANT,
    max_objects: int = 4,
    max_morphisms: int = 8,
) -> IndexedCat:
    return slice_indexed(random_category(rng, max_objects, max_morphisms), variance)


# ----- Pseudo twists

INDISCRETE = FinCatFactory.build_concrete(
    ["0", "1"],
    {f"{i}>{j}": (str(i), str(j), (i, j)) for i in (0, 1) for j in (0, 1)},
    compose_payload=lambda g, f: (f[0], g[1]),
    identity_payload=lambda x: (int(x), int(x)),
    name="I2",
)


def _arrow(i: str, j: str) -> str:
    return f"{i}>{j}"


def _twisted_functor(
    F: FinFunctor, source: FinCat, target: FinCat, t: Tuple[int, int]
) -> FinFunctor:
    return FinFunctorFactory.build_entity(
        source,
        target,
        {
            pair(a, i): pair(F.obj(a), str(t[int(i)]))
            for a in F.source.objects
            for i in INDISCRETE.objects
        },
        {
            pair(k, _arrow(i, j)): pair(
                F.mor(k), _arrow(str(t[int(i)]), str(t[int(j)]))
            )
            for k in F.source.morphisms
            for i in INDISCRETE.objects
            for j in INDISCRETE.objects
        },
        name=F.name,
    )


def _twist_index(t: Tuple[int, int], i: str) -> str:
    return str(t[int(i)])


def twist(
    m: IndexedCat, rng: random.Random
) -> Tuple[IndexedCat, Dict[str, Tuple[int, int]]]:
    """
    Replaces each fibre M x by M x × I2, I2 the indiscrete category on two objects, and
    each reindexer M f by M f × t_f for a random map t_f of {0, 1}. The result is
    equivalent to m but no longer strict: its δ and γ are δ × ! and γ × !.

    Returns the twisted data and the chosen maps.
    """
    fibre = {x: FinCatServices.product(m.at(x), INDISCRETE) for x in m.base.objects}
    maps = {f: (rng.randint(0, 1), rng.randint(0, 1)) for f in m.base.mor_ids}
    reindex = {}
    for f, (x, y) in m.base.morphisms.items():
        source, target = (x, y) if m.covariant else (y, x)
        reindex[f] = _twisted_functor(m.fun(f), fibre[source], fibre[target], maps[f])
    draft = IndexedCatFactory.build_entity(m.base, m.variance, fibre, reindex, {}, {})

    compositor = {}
    for (g, f), delta in m.compositor.items():
        outer, inner = (g, f) if m.covariant else (f, g)
        gf = m.base.comp(g, f)
        source = FinFunctorServices.compose_functors(*draft.composite_source(g, f))
        compositor[(g, f)] = NatTransFactory.build_entity(
            source,
            reindex[gf],
            {
                pair(a, i): pair(
                    delta.at(a),
                    _arrow(
                        _twist_index(maps[outer], _twist_index(maps[inner], i)),
                        _twist_index(maps[gf], i),
                    ),
                )
                for a in delta.source_fun.source.objects
                for i in INDISCRETE.objects
            },
        )
    unitor = {}
    for x in m.base.objects:
        one = m.base.id(x)
        unitor[x] = NatTransFactory.build_entity(
            FinFunctorFactory.build_identity(fibre[x]),
            reindex[one],
            {
                pair(a, i): pair(m.gamma(x, a), _arrow(i, _twist_index(maps[one], i)))
                for a in m.at(x).objects
                for i in INDISCRETE.objects
            },
        )
    twisted = IndexedCatFactory.build_entity(
        m.base, m.variance, fibre, reindex, compositor, unitor, name=f"{m.name}~"
    )
    return twisted, maps


def random_pseudo_indexed(
    rng: random.Random, variance: str = CONTRAVARIANT, **caps
) -> IndexedCat:
    return twist(random_strict_indexed(rng, variance, **caps), rng)[0]


def central_twist(
    m: IndexedCat, rng: Optional[random.Random] = None
) -> Tuple[IndexedCat, Dict[str, int]]:
    """
    Replaces each fibre M x by M x × Z2 and each reindexer M f by M f × 1. For a random
    charge c on the base morphisms, δ_{g,f} gains the Z2 part c(g) + c(f) + c(g∘f) and
    γ_x the part c(1_x). The fibres are not thin, so a wrong Z2 part is only caught by
    the coherence laws. Without rng the charge is zero.

    Returns the twisted data and the charge.
    """
    z2 = cyclic_group(2)
    one = FinFunctorFactory.build_identity(z2)
    fibre = {x: FinCatServices.product(m.at(x), z2) for x in m.base.objects}
    reindex = {
        f: FinFunctorServices.product_functor(m.fun(f), one) for f in m.base.morphisms
    }
    charge = {f: rng.randint(0, 1) if rng else 0 for f in m.base.morphisms}
    draft = IndexedCatFactory.build_entity(m.base, m.variance, fibre, reindex, {}, {})

    compositor = {}
    for (g, f), delta in m.compositor.items():
        gf = m.base.comp(g, f)
        s = (charge[g] + charge[f] + charge[gf]) % 2
        source = FinFunctorServices.compose_functors(*draft.composite_source(g, f))
        compositor[(g, f)] = NatTransFactory.build_entity(
            source,
            reindex[gf],
            {
                pair(a, "*"): pair(delta.at(a), f"r{s}")
                for a in delta.source_fun.source.objects
            },
        )
    unitor = {}
    for x in m.base.objects:
        u = charge[m.base.id(x)]
        unitor[x] = NatTransFactory.build_entity(
            FinFunctorFactory.build_identity(fibre[x]),
            reindex[m.base.id(x)],
            {pair(a, "*"): pair(m.gamma(x, a), f"r{u}") for a in m.at(x).objects},
        )
    twisted = IndexedCatFactory.build_entity(
        m.base, m.variance, fibre, reindex, compositor, unitor, name=f"{m.name}×Z2"
    )
    return twisted, charge


def random_central_pseudo_indexed(
    rng: random.Random, variance: str = CONTRAVARIANT, **caps
) -> IndexedCat:
    return central_twist(random_strict_indexed(rng, variance, **caps), rng)[0]


def flip_central(ident: str) -> str:
    """The morphism of M x × Z2 with the same M x part and the other Z2 part."""
    k, r = unpair(ident)
    return pair(k, "r1" if r == "r0" else "r0")


def random_split_fibration(rng: random.Random, **caps) -> ClovenFibration:
    """The projection of the total of a random strict contravariant indexed category."""
    m = random_strict_indexed(rng, CONTRAVARIANT, **caps)
    return GrothServices.grothendieck(m).fibration


# ----- Lax monoidal structure over union-closed families


def subset_id(s: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def _subset(ident: str) -> FrozenSet[int]:
    return frozenset(int(i) for i in ident[1:-1].split(",") if i)


def _powerset(s: FrozenSet[int]) -> Iterable[FrozenSet[int]]:
    items = sorted(s)
    for r in range(len(items) + 1):
        for chosen in combinations(items, r):
            yield frozenset(chosen)


def _inclusion_poset(sets: Iterable[FrozenSet[int]], name: str) -> FinCat:
    named = {subset_id(s): s for s in sets}
    return FinCatFactory.build_poset(
        sorted(named, key=lambda k: (len(named[k]), k)),
        lambda a, b: named[a] <= named[b],
        name=name,
    )


def union_closed_family(
    rng: random.Random, n: int = 3, generators: int = 3
) -> CocartesianWitness:
    """
    A random family of subsets of {0..n-1} closed under union and containing ∅, ordered
    by inclusion. Union is the coproduct and ∅ the initial object.
    """
    family = {frozenset()}
    for _ in range(generators):
        family.add(frozenset(i for i in range(n) if rng.random() < 0.5))
    while True:
        joins = {s | t for s in family for t in family} - family
        if not joins:
            break
        family |= joins
    base = _inclusion_poset(family, name=f"U{n}")
    coproducts = {}
    for s in family:
        for t in family:
            u = subset_id(s | t)
            x, y = subset_id(s), subset_id(t)
            coproducts[(x, y)] = (u, f"{x}<={u}", f"{y}<={u}")
    return CocartesianWitnessFactory.build_entity(
        base, coproducts, subset_id(()), name=f"(U{n}, ∪)"
    )


def union_lax_monoidal(
    rng: random.Random,
    n: int = 3,
    twisted: bool = False,
    w: Optional[CocartesianWitness] = None,
) -> Tuple[LaxMonoidalIndexed, CocartesianWitness]:
    """
    Over a union-closed family, S ↦ the subsets of S∩K for a random K, reindexing by
    inclusion and μ(A, B) = A ∪ B. Strict, with identity structure cells.

    twisted: Multiplies every fibre by I2 through `twist` and μ by a random
    τ: {0, 1}² -> {0, 1}; the structure cells become the unique isos of the now thin
    fibres.
    """
    w = w or union_closed_family(rng, n)
    base = w.base
    keep = frozenset(i for i in range(n) if rng.random() < 0.7)
    fibre = {
        x: _inclusion_poset(_powerset(_subset(x) & keep), name=f"P({x})")
        for x in base.objects
    }
    reindex = {
        f: FinFunctorFactory.build_entity(
            fibre[x],
            fibre[y],
            {a: a for a in fibre[x].objects},
            {k: k for k in fibre[x].morphisms},
            name=f"M({f})",
        )
        for f, (x, y) in base.morphisms.items()
    }
    carrier = IndexedCatFactory.build_strict(
        base, COVARIANT, fibre, reindex, name="P∩K"
    )
    sets = {a: _subset(a) for cat in fibre.values() for a in cat.objects}

    def union(x: str, y: str):
        target = fibre[w.plus(x, y)]
        return BifunctorFactory.build_from_functions(
            fibre[x],
            fibre[y],
            target,
            lambda a, b: subset_id(sets[a] | sets[b]),
            lambda k, l: f"{subset_id(sets[fibre[x].dom(k)] | sets[fibre[y].dom(l)])}"
            f"<={subset_id(sets[fibre[x].cod(k)] | sets[fibre[y].cod(l)])}",
            name=f"∪_{x},{y}",
        )

    laxator = {(x, y): union(x, y) for (x, y) in w.monoidal.tensor.obj_map}
    unit = subset_id(())
    if not twisted:
        return (
            LaxMonoidalIndexedFactory.build_strict(
                carrier, w.monoidal, laxator, unit, braided=True, name="(P∩K, ∪)"
            ),
            w,
        )
    twisted_carrier, _ = twist(carrier, rng)
    tau = {(i, j): str(rng.randint(0, 1)) for i in "01" for j in "01"}
    twisted_laxator = {}
    for (x, y), mu in laxator.items():
        left, right = twisted_carrier.at(x), twisted_carrier.at(y)
        obj_map = {
            (pair(a, i), pair(b, j)): pair(v, tau[(i, j)])
            for (a, b), v in mu.obj_map.items()
            for i in "01"
            for j in "01"
        }
        mor_map = {
            (pair(k, _arrow(i, i2)), pair(l, _arrow(j, j2))): pair(
                h, _arrow(tau[(i, j)], tau[(i2, j2)])
            )
            for (k, l), h in mu.mor_map.items()
            for i in "01"
            for i2 in "01"
            for j in "01"
            for j2 in "01"
        }
        twisted_laxator[(x, y)] = BifunctorFactory.build_entity(
            left,
            right,
            twisted_carrier.at(w.plus(x, y)),
            obj_map,
            mor_map,
            name=mu.name,
        )
    l = LaxMonoidalIndexedFactory.build_thin(
        twisted_carrier,
        w.monoidal,
        twisted_laxator,
        pair(unit, str(rng.randint(0, 1))),
        braided=True,
        name="(P∩K, ∪)~",
    )
    return l, w


def central_lax_monoidal(l: LaxMonoidalIndexed) -> LaxMonoidalIndexed:
    """
    l multiplied with Z2 as a strict symmetric monoidal category: the carrier goes
    through `central_twist` with zero charge, μ adds the Z2 parts and every structure
    cell gains the Z2 part r0.
    """
    carrier, _ = central_twist(l.carrier)
    z2 = cyclic_group(2)

    def lift(cells):
        return {
            tuple(pair(a, "*") for a in key): pair(k, "r0")
            for key, k in cells.items()
        }

    def lift_one(cells):
        return {pair(a, "*"): pair(k, "r0") for a, k in cells.items()}

    laxator = {}
    for (x, y), mu in l.laxator.items():
        laxator[(x, y)] = BifunctorFactory.build_entity(
            carrier.at(x),
            carrier.at(y),
            carrier.at(l.base_monoidal.t(x, y)),
            {
                (pair(a, "*"), pair(b, "*")): pair(v, "*")
                for (a, b), v in mu.obj_map.items()
            },
            {
                (pair(k, r), pair(h, s)): pair(v, z2.comp(r, s))
                for (k, h), v in mu.mor_map.items()
                for r in z2.morphisms
                for s in z2.morphisms
            },
            name=mu.name,
        )
    return LaxMonoidalIndexedFactory.build_entity(
        carrier,
        l.base_monoidal,
        laxator,
        {fg: lift(cells) for fg, cells in l.laxator_cells.items()},
        pair(l.unit_obj, "*"),
        {xyz: lift(cells) for xyz, cells in l.omega.items()},
        {x: lift_one(cells) for x, cells in l.xi.items()},
        {x: lift_one(cells) for x, cells in l.zeta.items()},
        (
            {xy: lift(cells) for xy, cells in l.braid_cell.items()}
            if l.braid_cell is not None
            else None
        ),
        name=f"{l.name}×Z2",
    )
