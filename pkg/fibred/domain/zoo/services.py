import logging
from functools import lru_cache
from itertools import permutations
from itertools import product as cartesian
from typing import Optional, Tuple, Type

from django.conf import settings

from fibred.domain.fib.models import MonoidalFibrationData
from fibred.domain.fincat.models import (
    Bifunctor,
    BifunctorFactory,
    FinCat,
    FinCatFactory,
    FinFunctorFactory,
    LawReport,
)
from fibred.domain.fincat.services import FinCatServices
from fibred.domain.groth.models import GrothResult
from fibred.domain.groth.services import GrothServices
from fibred.domain.indexed.generators import slice_indexed
from fibred.domain.indexed.models import (
    COVARIANT,
    Indexed1Cell,
    IndexedCatFactory,
    LaxMonoidalIndexed,
    LaxMonoidalIndexedFactory,
)
from fibred.domain.indexed.services import Indexed1CellServices
from fibred.domain.moncat.models import CocartesianWitness, MonoidalData
from fibred.domain.moncat.services import CocartesianServices, CocartesianWitnessFactory
from utils.data_manipulation.type_conversion import pair, tuple_id, unpair, untuple_id
from utils.django.exceptions import MonoidLawFailure, SizeLimitExceeded, UnknownObject

from .models import (
    SIMPLE_GRAPH,
    ConstituentMonoid,
    Decorator,
    DecoratorFactory,
    FinSetSkeleton,
    NetworkModel,
    function_id,
    function_images,
    subset_atoms,
)

log = logging.getLogger(__name__)

GRAPH_BOUND_LIMIT = 3


@lru_cache(maxsize=None)
def skeleton(bound: int) -> FinSetSkeleton:
    return FinSetSkeleton(bound)


def _power(c: FinCat, n: int) -> FinCat:
    """C^n, objects and morphisms as tuple identifiers."""
    arrows = {
        tuple_id(ks): (
            tuple_id(c.dom(k) for k in ks),
            tuple_id(c.cod(k) for k in ks),
            ks,
        )
        for ks in cartesian(c.mor_ids, repeat=n)
    }
    return FinCatFactory.build_concrete(
        [tuple_id(xs) for xs in cartesian(c.objects, repeat=n)],
        arrows,
        compose_payload=lambda g, f: tuple(c.comp(a, b) for a, b in zip(g, f)),
        identity_payload=lambda x: tuple(c.id(o) for o in untuple_id(x)),
        name=f"{c.name}^{n}",
    )


class ZooServices:
    """
    Worked examples at bounded scale.

    Methods:
    - decorator_opindexed(d, bound) -> (LaxMonoidalIndexed, CocartesianWitness)
    - graph_opindexed(vertex_bound) -> (LaxMonoidalIndexed, CocartesianWitness)
    - vertex_opfibration(vertex_bound) -> (GrothResult, MonoidalFibrationData)
    - slice_opindexed(w) -> LaxMonoidalIndexed
    - family_fibration(c, set_bound) -> (LaxMonoidalIndexed, CocartesianWitness)
    - graph_inclusion(lower, upper) -> Indexed1Cell
    """

    @staticmethod
    def get_decorator_factory() -> Type[DecoratorFactory]:
        return DecoratorFactory

    @staticmethod
    def poset_witness(c: FinCat) -> CocartesianWitness:
        """Joins as coproducts, for a finite poset with a least element and all joins."""
        w = CocartesianServices.find_cocartesian(c, require_total=True)
        if w is None:
            raise SizeLimitExceeded(
                item="not-cocartesian",
                message=f"{c.name} lacks joins or a least element",
            )
        return w

    # ----- Decorated and graph examples

    @staticmethod
    def decorator_opindexed(
        d: Decorator, bound: Optional[int] = None
    ) -> Tuple[LaxMonoidalIndexed, CocartesianWitness]:
        """
        n ↦ F(n) ordered by inclusion, f ↦ F(f), μ = φ and μ_0 = φ_0, over the FinSet
        skeleton with its partial coproducts. Strict, with identity structure cells.
        """
        bound = d.bound if bound is None else bound
        finset = skeleton(bound)
        base, w = finset.category, finset.witness
        fibre = {}
        for n in base.objects:
            values = d.values[n]
            fibre[n] = FinCatFactory.build_poset(
                values,
                lambda a, b: subset_atoms(a) <= subset_atoms(b),
                name=f"F({n})",
            )
        reindex = {}
        for f, (m, n) in base.morphisms.items():
            source, target = fibre[m], fibre[n]
            obj_map = {a: d.act(f, a) for a in source.objects}
            reindex[f] = FinFunctorFactory.build_entity(
                source,
                target,
                obj_map,
                {
                    k: f"{obj_map[source.dom(k)]}<={obj_map[source.cod(k)]}"
                    for k in source.morphisms
                },
                name=f"F({f})",
            )
        carrier = IndexedCatFactory.build_strict(
            base, COVARIANT, fibre, reindex, name=f"{d.kind}/FinSet{bound}"
        )

        def laxator(m: str, n: str) -> Bifunctor:
            left, right = fibre[m], fibre[n]
            offset = int(m)

            def on_objects(a, b):
                return d.phi(offset, a, b)

            return BifunctorFactory.build_from_functions(
                left,
                right,
                fibre[w.plus(m, n)],
                on_objects,
                lambda k, l: f"{on_objects(left.dom(k), right.dom(l))}"
                f"<={on_objects(left.cod(k), right.cod(l))}",
                name=f"φ_{m},{n}",
            )

        l = LaxMonoidalIndexedFactory.build_strict(
            carrier,
            w.monoidal,
            {(m, n): laxator(m, n) for (m, n) in w.monoidal.tensor.obj_map},
            d.unit,
            braided=False,
            name=f"({d.kind}, ⊔)",
        )
        log.debug("decorated %s up to %d vertices", d.kind, bound)
        return l, w

    @classmethod
    def graph_opindexed(
        cls, vertex_bound: Optional[int] = None
    ) -> Tuple[LaxMonoidalIndexed, CocartesianWitness]:
        """
        Simple directed graphs (loops allowed) on n vertices with vertex-fixing
        homomorphisms, pushed forward along functions, with disjoint union as laxator.

        Raises:
        - SizeLimitExceeded: Above three vertices.
        """
        bound = settings.VERTEX_BOUND if vertex_bound is None else vertex_bound
        if bound > GRAPH_BOUND_LIMIT:
            raise SizeLimitExceeded(
                item="vertex-bound",
                message=f"{bound} vertices exceed the limit of {GRAPH_BOUND_LIMIT}",
            )
        return cls.decorator_opindexed(
            DecoratorFactory.build_entity(bound, SIMPLE_GRAPH)
        )

    @classmethod
    def vertex_opfibration(
        cls, vertex_bound: Optional[int] = None
    ) -> Tuple[GrothResult, MonoidalFibrationData]:
        l, _ = cls.graph_opindexed(vertex_bound)
        return GrothServices.monoidal_total(l)

    @staticmethod
    def graph_inclusion(
        lower: LaxMonoidalIndexed, upper: LaxMonoidalIndexed
    ) -> Indexed1Cell:
        """The inclusion of a smaller graph universe into a larger one, over FinSet."""
        return Indexed1CellServices.inclusion_1cell(
            lower.carrier, upper.carrier, name="graphs↪"
        )

    # ----- Slices

    @staticmethod
    def slice_opindexed(w: CocartesianWitness) -> LaxMonoidalIndexed:
        """
        x ↦ X/x with post-composition, μ(a, b) = a + b and μ_0 = 1_0. The structure
        cells are the base associator, unitors and braiding, read as slice morphisms.

        Raises:
        - SizeLimitExceeded: Above the configured search bound.
        """
        C, T = w.base, w.monoidal
        if len(C.objects) > settings.SEARCH_MAX_OBJECTS:
            raise SizeLimitExceeded(
                item="slice-base",
                message=f"{C.name} has more than {settings.SEARCH_MAX_OBJECTS} objects",
            )
        carrier = slice_indexed(C, COVARIANT)
        laxator = {}
        for (x, y), xy in T.tensor.obj_map.items():
            laxator[(x, y)] = BifunctorFactory.build_from_functions(
                carrier.at(x),
                carrier.at(y),
                carrier.at(xy),
                lambda a, b: T.tensor.mor_map.get((a, b)),
                lambda k, l: _slice_tensor(T, k, l),
                name=f"μ_{x},{y}",
            )
        draft = LaxMonoidalIndexedFactory.build_entity(
            carrier, T, laxator, {}, C.id(T.unit), {}, {}, {}
        )

        def dom(a):
            return C.dom(a)

        laxator_cells = {}
        for (f, g), fg in T.tensor.mor_map.items():
            (x, x2), (y, y2) = C.morphisms[f], C.morphisms[g]
            if (x, y) not in laxator or (x2, y2) not in laxator:
                continue
            home = carrier.at(T.t(x2, y2))
            laxator_cells[(f, g)] = {
                (a, b): home.id(carrier.act(fg, v))
                for (a, b), v in laxator[(x, y)].obj_map.items()
            }
        omega = {}
        for (x, y, z) in T.associator:
            cells = {}
            for a in carrier.at(x).objects:
                for b in carrier.at(y).objects:
                    for c in carrier.at(z).objects:
                        try:
                            target = draft.mu(x, T.t(y, z), a, draft.mu(y, z, b, c))
                            cells[(a, b, c)] = pair(
                                T.alpha(dom(a), dom(b), dom(c)), target
                            )
                        except UnknownObject:
                            continue
            omega[(x, y, z)] = cells
        xi, zeta = {}, {}
        for x in C.objects:
            home = carrier.at(x)
            for a in home.objects:
                try:
                    xi.setdefault(x, {})[a] = home.inverse(
                        pair(T.lam(dom(a)), a)
                    )
                except UnknownObject:
                    pass
                try:
                    zeta.setdefault(x, {})[a] = pair(T.rho(dom(a)), a)
                except UnknownObject:
                    pass
        braid_cell = None
        if T.braiding is not None:
            braid_cell = {}
            for (x, y) in T.braiding:
                cells = {}
                for a in carrier.at(x).objects:
                    for b in carrier.at(y).objects:
                        try:
                            cells[(a, b)] = pair(
                                T.beta(dom(a), dom(b)), draft.mu(y, x, b, a)
                            )
                        except UnknownObject:
                            continue
                braid_cell[(x, y)] = cells
        return LaxMonoidalIndexedFactory.build_entity(
            carrier,
            T,
            laxator,
            laxator_cells,
            C.id(T.unit),
            omega,
            xi,
            zeta,
            braid_cell=braid_cell,
            name=f"({C.name}/-, +)",
        )

    # ----- Families

    @staticmethod
    def product_witness(bound: int) -> CocartesianWitness:
        """FinSet^op with m·n as the coproduct of m and n, projections as coprojections."""
        base = FinCatServices.opposite(skeleton(bound).category)
        products = {}
        for m in range(bound + 1):
            for n in range(bound + 1):
                if m * n > bound:
                    continue
                s = m * n
                products[(str(m), str(n))] = (
                    str(s),
                    function_id(s, m, tuple(r // n for r in range(s))),
                    function_id(s, n, tuple(r % n for r in range(s))),
                )
        return CocartesianWitnessFactory.build_entity(
            base, products, "1", name=f"(FinSet{bound}^op, ×)"
        )

    @classmethod
    def family_fibration(
        cls, c: MonoidalData, set_bound: Optional[int] = None
    ) -> Tuple[LaxMonoidalIndexed, CocartesianWitness]:
        """
        X ↦ [X, C] = C^X over FinSet^op, reindexing by precomposition, and
        μ(A, B)_(i, j) = A_i ⊗ B_j with μ_0 the family at I on one point. The structure
        cells are those of C, pointwise.

        Raises:
        - SizeLimitExceeded: If some fibre would exceed the generator morphism cap.
        """
        bound = settings.SET_BOUND if set_bound is None else set_bound
        C = c.base
        if len(C.morphisms) ** bound > settings.GENERATOR_MAX_MORPHISMS ** 2:
            raise SizeLimitExceeded(
                item="family-fibres",
                message=f"{C.name}^{bound} has {len(C.morphisms) ** bound} morphisms",
            )
        w = cls.product_witness(bound)
        base, T = w.base, w.monoidal
        fibre = {n: _power(C, int(n)) for n in base.objects}
        reindex = {}
        for f, (n, m) in base.morphisms.items():
            images = function_images(f)
            reindex[f] = FinFunctorFactory.build_entity(
                fibre[n],
                fibre[m],
                {a: _pull(a, images) for a in fibre[n].objects},
                {k: _pull(k, images) for k in fibre[n].morphisms},
                name=f"-∘{f}",
            )
        carrier = IndexedCatFactory.build_strict(
            base, COVARIANT, fibre, reindex, name=f"[-, {C.name}]"
        )

        def pointwise(table, m, n):
            def apply(a, b):
                left, right = untuple_id(a), untuple_id(b)
                try:
                    return tuple_id(
                        table(left[r // n], right[r % n]) for r in range(m * n)
                    )
                except UnknownObject:
                    return None

            return apply

        laxator = {}
        for (m, n), s in T.tensor.obj_map.items():
            mi, ni = int(m), int(n)
            laxator[(m, n)] = BifunctorFactory.build_from_functions(
                fibre[m],
                fibre[n],
                fibre[s],
                pointwise(c.t, mi, ni),
                pointwise(c.tm, mi, ni),
                name=f"⊗_{m},{n}",
            )
        draft = LaxMonoidalIndexedFactory.build_entity(
            carrier, T, laxator, {}, tuple_id([c.unit]), {}, {}, {}
        )

        laxator_cells = {}
        for (f, g), fg in T.tensor.mor_map.items():
            (x, x2), (y, y2) = base.morphisms[f], base.morphisms[g]
            if (x, y) not in laxator or (x2, y2) not in laxator:
                continue
            home = fibre[T.t(x2, y2)]
            laxator_cells[(f, g)] = {
                (a, b): home.id(carrier.act(fg, v))
                for (a, b), v in laxator[(x, y)].obj_map.items()
            }

        omega = {}
        for (x, y, z) in T.associator:
            n, p = int(y), int(z)
            cells = {}
            for a in fibre[x].objects:
                for b in fibre[y].objects:
                    for cc in fibre[z].objects:
                        A, B, Cs = untuple_id(a), untuple_id(b), untuple_id(cc)
                        try:
                            draft.mu(x, T.t(y, z), a, draft.mu(y, z, b, cc))
                            cells[(a, b, cc)] = tuple_id(
                                c.alpha(A[r // (n * p)], B[(r // p) % n], Cs[r % p])
                                for r in range(int(x) * n * p)
                            )
                        except UnknownObject:
                            continue
            omega[(x, y, z)] = cells
        xi, zeta = {}, {}
        for x in base.objects:
            home = fibre[x]
            for a in home.objects:
                A = untuple_id(a)
                try:
                    xi.setdefault(x, {})[a] = tuple_id(C.inverse(c.lam(v)) for v in A)
                    zeta.setdefault(x, {})[a] = tuple_id(c.rho(v) for v in A)
                except UnknownObject:
                    continue
        braid_cell = None
        if c.braiding is not None:
            braid_cell = {}
            for (x, y) in T.tensor.obj_map:
                if not T.defined(y, x):
                    continue
                m = int(x)
                cells = {}
                for a in fibre[x].objects:
                    for b in fibre[y].objects:
                        A, B = untuple_id(a), untuple_id(b)
                        try:
                            cells[(a, b)] = tuple_id(
                                c.beta(A[r % m], B[r // m])
                                for r in range(len(A) * len(B))
                            )
                        except UnknownObject:
                            continue
                braid_cell[(x, y)] = cells
        l = LaxMonoidalIndexedFactory.build_entity(
            carrier,
            T,
            laxator,
            laxator_cells,
            tuple_id([c.unit]),
            omega,
            xi,
            zeta,
            braid_cell=braid_cell,
            name=f"([-, {C.name}], ⊗)",
        )
        return l, w


def _pull(ident: str, images: Tuple[int, ...]) -> str:
    parts = untuple_id(ident)
    return tuple_id(parts[i] for i in images)


def _slice_tensor(T: MonoidalData, k: str, l: str) -> str:
    (k1, b1), (k2, b2) = unpair(k), unpair(l)
    return pair(T.tm(k1, k2), T.tm(b1, b2))


class NetworkModelServices:
    """
    Network models from decorators.

    Methods:
    - decorator_to_network_model(d, n_bound) -> NetworkModel
    - check_network_model(nm) -> LawReport
    - network_model_action(nm) -> LawReport
    """

    @staticmethod
    def constituent_monoid(d: Decorator, n: int) -> ConstituentMonoid:
        """F(n) with a·b = F(∇_n) φ_{n,n}(a, b) and unit F(!_n) φ_0."""
        nabla = function_id(2 * n, n, tuple(i % n for i in range(2 * n)))
        bang = function_id(0, n, ())
        elements = d.values[str(n)]
        product = {
            (a, b): d.act(nabla, d.phi(n, a, b)) for a in elements for b in elements
        }
        return ConstituentMonoid(str(n), elements, product, d.act(bang, d.unit))

    @classmethod
    def decorator_to_network_model(
        cls, d: Decorator, n_bound: Optional[int] = None
    ) -> NetworkModel:
        """
        Raises:
        - MonoidLawFailure: With the first witness, if a constituent monoid or a laxator
            component breaks a monoid law.
        """
        n_bound = d.bound if n_bound is None else min(n_bound, d.bound)
        model = NetworkModel(
            d,
            {str(n): cls.constituent_monoid(d, n) for n in range(n_bound + 1)},
            name=f"NM({d.name})",
        )
        report = cls.check_network_model(model)
        if not report.passed:
            v = report.violations[0]
            raise MonoidLawFailure(item=v.law, message=v.message, witness=v.witness)
        return model

    @staticmethod
    def check_network_model(nm: NetworkModel) -> LawReport:
        """Monoid laws and commutativity of each F(n), and φ_{m,n} a monoid morphism."""
        report = LawReport(subject=nm.name)
        d = nm.decorator
        for n, mon in sorted(nm.monoids.items()):
            for a in mon.elements:
                report.expect("unit", (n, a), lambda: mon.mul(mon.unit, a), lambda: a)
                report.expect("unit", (n, a), lambda: mon.mul(a, mon.unit), lambda: a)
                for b in mon.elements:
                    report.expect(
                        "commutative",
                        (n, a, b),
                        lambda: mon.mul(a, b),
                        lambda: mon.mul(b, a),
                    )
                    for c in mon.elements:
                        report.expect(
                            "associative",
                            (n, a, b, c),
                            lambda: mon.mul(mon.mul(a, b), c),
                            lambda: mon.mul(a, mon.mul(b, c)),
                        )
        for m, left in sorted(nm.monoids.items()):
            for n, right in sorted(nm.monoids.items()):
                s = str(int(m) + int(n))
                if s not in nm.monoids:
                    continue
                target = nm.monoids[s]
                report.expect(
                    "laxator-unit",
                    (m, n),
                    lambda: d.phi(int(m), left.unit, right.unit),
                    lambda: target.unit,
                )
                for a1, a2 in cartesian(left.elements, repeat=2):
                    for b1, b2 in cartesian(right.elements, repeat=2):
                        report.expect(
                            "laxator-multiplicative",
                            (m, n, a1, b1, a2, b2),
                            lambda: d.phi(int(m), left.mul(a1, a2), right.mul(b1, b2)),
                            lambda: target.mul(
                                d.phi(int(m), a1, b1), d.phi(int(m), a2, b2)
                            ),
                        )
        return report.finish()

    @staticmethod
    def network_model_action(nm: NetworkModel) -> LawReport:
        """Each bijection σ of n acts on F(n) by a monoid homomorphism."""
        report = LawReport(subject=f"{nm.name} symmetric action")
        d = nm.decorator
        for n, mon in sorted(nm.monoids.items()):
            size = int(n)
            for images in permutations(range(size)):
                sigma = function_id(size, size, images)
                report.expect(
                    "action-unit",
                    (n, sigma),
                    lambda: d.act(sigma, mon.unit),
                    lambda: mon.unit,
                )
                for a in mon.elements:
                    for b in mon.elements:
                        report.expect(
                            "action-multiplicative",
                            (n, sigma, a, b),
                            lambda: d.act(sigma, mon.mul(a, b)),
                            lambda: mon.mul(d.act(sigma, a), d.act(sigma, b)),
                        )
        return report.finish()

