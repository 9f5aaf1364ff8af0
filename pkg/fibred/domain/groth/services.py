import logging
from typing import Dict, List, Optional, Tuple, Type

from fibred.domain.fib.models import (
    FIBRATION,
    OPFIBRATION,
    ClovenFibration,
    ClovenFibrationFactory,
    Fibred1Cell,
    Fibred2Cell,
    FibredCellFactory,
    MonoidalFibrationData,
)
from fibred.domain.fib.services import FibrationServices
from fibred.domain.fincat.models import (
    BifunctorFactory,
    FinCatFactory,
    FinFunctor,
    FinFunctorFactory,
    LawReport,
    NatTransFactory,
)
from fibred.domain.fincat.services import FinFunctorServices
from fibred.domain.indexed.models import (
    CONTRAVARIANT,
    COVARIANT,
    GrothMor,
    Indexed1Cell,
    Indexed2Cell,
    IndexedCat,
    IndexedCatFactory,
    LaxMonoidalIndexed,
)
from fibred.domain.moncat.models import (
    MonoidalFactory,
    MonoidalFunctorData,
    MonoidalFunctorFactory,
)
from fibred.domain.moncat.services import MonoidalServices
from utils.data_manipulation.type_conversion import pair
from utils.django.exceptions import MalformedTable, ShapeMismatch, UnknownObject

from .models import GrothResult, GrothResultFactory

log = logging.getLogger(__name__)

compose = FinFunctorServices.compose_functors


class GrothServices:
    """
    The Grothendieck construction, its inverse and its monoidal refinement.

    Methods:
    - grothendieck(m) -> GrothResult
    - fibration_to_indexed(p) -> IndexedCat
    - roundtrip_check(m | p) -> LawReport
    - groth_1cell(c) -> Fibred1Cell; groth_2cell(c) -> Fibred2Cell
    - monoidal_grothendieck(l) -> MonoidalFibrationData
    - braided_symmetric_extension(l) -> Dict[Tuple[str, str], str]
    - monoidal_groth_1cell(c, source, target) -> MonoidalFunctorData
    - check_monoidal_groth_1cell(c, source, target) -> LawReport
    - check_monoidal_groth_2cell(c, source, target) -> LawReport
    """

    @staticmethod
    def get_result_factory() -> Type[GrothResultFactory]:
        return GrothResultFactory

    @staticmethod
    def grothendieck(m: IndexedCat) -> GrothResult:
        """
        Builds ∫M: objects (x, a) with a in M x, morphisms (f, k) composed through δ and γ.

        Contravariant data gives a fibration, covariant data an opfibration; the lifts
        (f, 1) are the cleavage, split exactly when M is strict.
        """
        B = m.base
        objects = {pair(x, a): (x, a) for x in B.objects for a in m.at(x).objects}
        morphisms: Dict[str, GrothMor] = {}
        for f in B.mor_ids:
            x, y = B.morphisms[f]
            if m.covariant:
                for a in m.at(x).objects:
                    for k in m.at(y).out_of(m.act(f, a)):
                        h = GrothMor((x, a), (y, m.at(y).cod(k)), f, k)
                        morphisms[m.g_ident(h)] = h
            else:
                for b in m.at(y).objects:
                    for k in m.at(x).into(m.act(f, b)):
                        h = GrothMor((x, m.at(x).dom(k)), (y, b), f, k)
                        morphisms[m.g_ident(h)] = h

        leaving: Dict[Tuple[str, str], List[str]] = {}
        for k, h in morphisms.items():
            leaving.setdefault(h.source, []).append(k)
        table = {}
        for k1, first in morphisms.items():
            for k2 in leaving.get(first.target, ()):
                table[(k2, k1)] = m.g_ident(m.g_comp(morphisms[k2], first))
        total = FinCatFactory.build_entity(
            objects=list(objects),
            morphisms={
                k: (pair(*h.source), pair(*h.target)) for k, h in morphisms.items()
            },
            identity={e: m.g_ident(m.g_id(x, a)) for e, (x, a) in objects.items()},
            compose=table,
            name=f"∫{m.name}",
        )
        proj = FinFunctorFactory.build_entity(
            total,
            B,
            {e: x for e, (x, _) in objects.items()},
            {k: h.base for k, h in morphisms.items()},
            name=f"P_{m.name}",
        )
        cleavage = {}
        for f in B.mor_ids:
            x, y = B.morphisms[f]
            for e in m.at(x if m.covariant else y).objects:
                lift = m.g_lift(f, e)
                cleavage[(f, pair(x if m.covariant else y, e))] = m.g_ident(lift)
        fibration = ClovenFibrationFactory.build_entity(
            total,
            B,
            proj,
            cleavage,
            OPFIBRATION if m.covariant else FIBRATION,
            split=m.strict,
            name=f"P: ∫{m.name} -> {B.name}",
        )
        log.info(
            "built ∫%s: %d objects, %d morphisms",
            m.name,
            len(objects),
            len(morphisms),
        )
        return GrothResultFactory.build_entity(m, total, fibration, objects, morphisms)

    @staticmethod
    def fibration_to_indexed(p: ClovenFibration) -> IndexedCat:
        """
        Reads off the indexed category of a cloven (op)fibration.

        Fibres and reindexers come from fib; δ and γ are the unique vertical comparisons
        between composites of chosen lifts and chosen lifts of composites.
        """
        B, E = p.base, p.total
        fibres = {x: FibrationServices.fibre(p, x) for x in B.objects}
        reindex = {f: FibrationServices.reindex(p, f) for f in B.mor_ids}
        variance = COVARIANT if p.opfibration else CONTRAVARIANT
        draft = IndexedCatFactory.build_entity(B, variance, fibres, reindex, {}, {})

        compositor = {}
        for g, f in B.composable_pairs():
            source = compose(*draft.composite_source(g, f))
            gf = B.comp(g, f)
            components = {}
            for e in source.source.objects:
                if p.opfibration:
                    z = B.cod(g)
                    through = E.comp(p.lift(g, p.lift_end(f, e)), p.lift(f, e))
                    psi = FibrationServices.factor_through(
                        p, p.lift(gf, e), through, B.id(z)
                    )
                    components[e] = fibres[z].inverse(psi)
                else:
                    through = E.comp(p.lift(g, e), p.lift(f, p.lift_end(g, e)))
                    components[e] = FibrationServices.factor_through(
                        p, p.lift(gf, e), through, B.id(B.dom(f))
                    )
            compositor[(g, f)] = NatTransFactory.build_entity(
                source, reindex[gf], components, name=f"δ_{g},{f}"
            )
        unitor = {}
        for x in B.objects:
            one = B.id(x)
            components = {
                e: p.lift(one, e) if p.opfibration else fibres[x].inverse(
                    p.lift(one, e)
                )
                for e in fibres[x].objects
            }
            unitor[x] = NatTransFactory.build_entity(
                FinFunctorFactory.build_identity(fibres[x]),
                reindex[one],
                components,
                name=f"γ_{x}",
            )
        return IndexedCatFactory.build_entity(
            B,
            variance,
            fibres,
            reindex,
            compositor,
            unitor,
            strict=p.split,
            name=f"M_{p.name}",
        )

    # ----- Round trips

    @classmethod
    def comparison_from_indexed(
        cls, m: IndexedCat, n: IndexedCat
    ) -> Dict[str, FinFunctor]:
        """
        Φ_x: M x -> fibre of ∫M over x, for n the indexed category read off ∫M.

        A fibre morphism h is sent to the vertical (1, γ∘h) (contravariant) or
        (1, h∘γ^-1) (covariant).
        """
        comparison = {}
        for x in m.base.objects:
            fibre, one = m.at(x), m.base.id(x)
            mor_map = {}
            for h, (a, b) in fibre.morphisms.items():
                if m.covariant:
                    k = fibre.comp(h, fibre.inverse(m.gamma(x, a)))
                else:
                    k = fibre.comp(m.gamma(x, b), h)
                mor_map[h] = m.g_ident(GrothMor((x, a), (x, b), one, k))
            comparison[x] = FinFunctorFactory.build_entity(
                fibre,
                n.at(x),
                {a: pair(x, a) for a in fibre.objects},
                mor_map,
                name=f"Φ_{x}",
            )
        return comparison

    @classmethod
    def roundtrip_check(cls, subject) -> LawReport:
        """
        Checks M ≅ M_{P_M} for an IndexedCat, or P ≅ P_{M_P} for a ClovenFibration,
        through the canonical comparisons.
        """
        if isinstance(subject, IndexedCat):
            return cls._roundtrip_indexed(subject)
        if isinstance(subject, ClovenFibration):
            return cls._roundtrip_fibration(subject)
        raise ShapeMismatch(
            item="roundtrip-subject",
            message=f"cannot round-trip a {type(subject).__name__}",
        )

    @classmethod
    def _roundtrip_indexed(cls, m: IndexedCat) -> LawReport:
        report = LawReport(subject=f"roundtrip {m.name}")
        g = cls.grothendieck(m)
        n = cls.fibration_to_indexed(g.fibration)
        phi = cls.comparison_from_indexed(m, n)
        B = m.base
        for x in B.objects:
            report.merge(FinFunctorServices.check_functor(phi[x]), f"comparison[{x}]")
            report.expect(
                "comparison-iso",
                (x,),
                lambda: FinFunctorServices.inverse_functor(phi[x]) is not None,
                lambda: True,
                f"Φ_{x} is not an isomorphism",
            )
        if not report.passed:
            return report.finish()

        for f in B.mor_ids:
            x, y = B.morphisms[f]
            src, tgt = (x, y) if m.covariant else (y, x)
            for a in m.at(src).objects:
                report.expect(
                    "comparison-reindex",
                    (f, a),
                    lambda: n.act(f, phi[src].obj(a)),
                    lambda: phi[tgt].obj(m.act(f, a)),
                )
            for h in m.at(src).mor_ids:
                report.expect(
                    "comparison-reindex",
                    (f, h),
                    lambda: n.act_mor(f, phi[src].mor(h)),
                    lambda: phi[tgt].mor(m.act_mor(f, h)),
                )
        for g2, f in B.composable_pairs():
            source = compose(*m.composite_source(g2, f))
            home = B.cod(g2) if m.covariant else B.dom(f)
            start = B.dom(f) if m.covariant else B.cod(g2)
            for e in source.source.objects:
                report.expect(
                    "comparison-compositor",
                    (g2, f, e),
                    lambda: n.delta(g2, f, phi[start].obj(e)),
                    lambda: phi[home].mor(m.delta(g2, f, e)),
                )
        for x in B.objects:
            for a in m.at(x).objects:
                report.expect(
                    "comparison-unitor",
                    (x, a),
                    lambda: n.gamma(x, phi[x].obj(a)),
                    lambda: phi[x].mor(m.gamma(x, a)),
                )
        if m.strict:
            # a split total decodes to identity δ and γ, not merely isomorphic ones
            for (g2, f), d in n.compositor.items():
                home = d.target_fun.target
                report.expect(
                    "strict-decoding",
                    (g2, f),
                    lambda: all(map(home.is_identity, d.components.values())),
                    lambda: True,
                    f"decoded δ at ({g2}, {f}) is not an identity",
                )
            for x, c in n.unitor.items():
                report.expect(
                    "strict-decoding",
                    (x,),
                    lambda: all(map(n.at(x).is_identity, c.components.values())),
                    lambda: True,
                    f"decoded γ at {x} is not an identity",
                )
        report.expect(
            "split",
            (m.name,),
            lambda: g.fibration.split,
            lambda: m.strict,
            "the total is split exactly when the indexed category is strict",
        )
        return report.finish()

    @classmethod
    def _roundtrip_fibration(cls, p: ClovenFibration) -> LawReport:
        report = LawReport(subject=f"roundtrip {p.name}")
        n = cls.fibration_to_indexed(p)
        g = cls.grothendieck(n)
        E = p.total
        mor_map = {}
        for k, h in g.morphisms.items():
            (x, e), (y, e2) = h.source, h.target
            if p.opfibration:
                mor_map[k] = E.comp(h.fibre, p.lift(h.base, e))
            else:
                mor_map[k] = E.comp(p.lift(h.base, e2), h.fibre)
        K = FinFunctorFactory.build_entity(
            g.total,
            E,
            {e: a for e, (x, a) in g.objects.items()},
            mor_map,
            name="K",
        )
        report.merge(FinFunctorServices.check_functor(K), "comparison")
        if not report.passed:
            return report.finish()
        report.expect(
            "comparison-iso",
            ("K",),
            lambda: FinFunctorServices.inverse_functor(K) is not None,
            lambda: True,
            "K is not an isomorphism of categories",
        )
        for k, h in sorted(g.morphisms.items()):
            report.expect(
                "comparison-over-base",
                (k,),
                lambda: p.over_mor(K.mor(k)),
                lambda: h.base,
            )
        for (f, e), k in sorted(g.fibration.cleavage.items()):
            report.expect(
                "comparison-cleavage",
                (f, e),
                lambda: K.mor(k),
                lambda: p.lift(f, K.obj(e)),
            )
        return report.finish()

    # ----- Cells

    @classmethod
    def groth_1cell(
        cls,
        c: Indexed1Cell,
        source: Optional[GrothResult] = None,
        target: Optional[GrothResult] = None,
    ) -> Fibred1Cell:
        """P_τ(x, a) = (F x, τ_x a), and P_τ(f, k) through the squares of τ."""
        source = source or cls.grothendieck(c.source)
        target = target or cls.grothendieck(c.target)
        top = FinFunctorFactory.build_entity(
            source.total,
            target.total,
            {e: pair(*c.transport_obj(p)) for e, p in source.objects.items()},
            {k: target.mor_id(c.transport(h)) for k, h in source.morphisms.items()},
            name=f"P_{c.name}",
        )
        return FibredCellFactory.build_1cell(
            source.fibration, target.fibration, top, c.base_fun, name=f"P_{c.name}"
        )

    @classmethod
    def groth_2cell(
        cls,
        c: Indexed2Cell,
        source: Optional[GrothResult] = None,
        target: Optional[GrothResult] = None,
    ) -> Fibred2Cell:
        """(P_m) at (x, a) is (α_x, (m_x)_a)."""
        source = source or cls.grothendieck(c.source.source)
        target = target or cls.grothendieck(c.source.target)
        lower = cls.groth_1cell(c.source, source, target)
        upper = cls.groth_1cell(c.target, source, target)
        top = NatTransFactory.build_entity(
            lower.top,
            upper.top,
            {e: target.mor_id(c.component(p)) for e, p in source.objects.items()},
            name=f"P_{c.name}",
        )
        return FibredCellFactory.build_2cell(
            lower, upper, top, c.base_nat, name=top.name
        )

    # ----- Monoidal Grothendieck construction

    @classmethod
    def monoidal_total(
        cls, l: LaxMonoidalIndexed
    ) -> Tuple[GrothResult, MonoidalFibrationData]:
        """
        The monoidal structure on ∫M from a lax monoidal M.

        (x, a)⊗(y, b) = (x⊗y, μ(a, b)) and (f, k)⊗(g, l) = (f⊗g, μ_{f,g} with μ(k, l));
        the unit is (I, μ_0); associator and unitors pair the base structure with ω, ξ
        and ζ. Pairs outside a partial μ stay undefined.
        """
        g = cls.grothendieck(l.carrier)
        T = l.base_monoidal

        def on_objects(e1, e2):
            try:
                return pair(*l.g_tensor_obj(g.objects[e1], g.objects[e2]))
            except UnknownObject:
                return None

        tensor = BifunctorFactory.build_from_functions(
            g.total,
            g.total,
            g.total,
            on_objects,
            lambda k1, k2: g.mor_id(l.g_tensor(g.morphisms[k1], g.morphisms[k2])),
            name=f"⊗_{l.name}",
        )
        associator = {}
        for (e1, e2), e12 in tensor.obj_map.items():
            for e3 in g.total.objects:
                if not (tensor.defined(e12, e3) and tensor.defined(e2, e3)):
                    continue
                if not tensor.defined(e1, tensor.obj(e2, e3)):
                    continue
                p, q, r = g.objects[e1], g.objects[e2], g.objects[e3]
                associator[(e1, e2, e3)] = g.mor_id(l.g_alpha(p, q, r))
        unit = pair(*l.g_unit())
        left = {
            e: g.mor_id(l.g_lambda(p))
            for e, p in g.objects.items()
            if tensor.defined(unit, e)
        }
        right = {
            e: g.mor_id(l.g_rho(p))
            for e, p in g.objects.items()
            if tensor.defined(e, unit)
        }
        braiding = None
        if l.braid_cell is not None and T.braiding is not None:
            braiding = cls.braided_symmetric_extension(l, g, tensor.obj_map)
        total_monoidal = MonoidalFactory.build_entity(
            g.total,
            tensor,
            unit,
            associator,
            left,
            right,
            braiding=braiding,
            symmetric=T.symmetric and braiding is not None,
            name=f"(∫{l.carrier.name}, ⊗)",
        )
        data = MonoidalFibrationData(
            g.fibration, total_monoidal, T, name=f"monoidal ∫{l.carrier.name}"
        )
        return g, data

    @classmethod
    def monoidal_grothendieck(cls, l: LaxMonoidalIndexed) -> MonoidalFibrationData:
        return cls.monoidal_total(l)[1]

    @classmethod
    def braided_symmetric_extension(
        cls,
        l: LaxMonoidalIndexed,
        g: Optional[GrothResult] = None,
        pairs=None,
    ) -> Dict[Tuple[str, str], str]:
        """
        The braiding (b_{x,y}, v) on ∫M, for every pair of total objects whose tensors
        in both orders are defined.

        Raises:
        - MalformedTable: If l has no braid cell or the base has no braiding.
        """
        if l.braid_cell is None or l.base_monoidal.braiding is None:
            raise MalformedTable(
                item="no-braid-cell", message=f"{l.name} carries no braiding"
            )
        g = g or cls.grothendieck(l.carrier)
        braiding = {}
        for e1, p in g.objects.items():
            for e2, q in g.objects.items():
                if pairs is not None and not ((e1, e2) in pairs and (e2, e1) in pairs):
                    continue
                try:
                    braiding[(e1, e2)] = g.mor_id(l.g_beta(p, q))
                except UnknownObject:
                    continue
        return braiding

    # ----- Monoidal 1- and 2-cells

    @classmethod
    def monoidal_groth_1cell(
        cls,
        c: Indexed1Cell,
        source: LaxMonoidalIndexed,
        target: LaxMonoidalIndexed,
        totals: Optional[Tuple[GrothResult, GrothResult]] = None,
    ) -> MonoidalFunctorData:
        """
        P_τ with laxator (ψ_{x,y}, m_{x,y}(a, b)) and unit (ψ_0, m_0).

        Raises:
        - ShapeMismatch: If c has no monoidal part.
        """
        part = c.monoidal_part
        if part is None:
            raise ShapeMismatch(
                item="no-monoidal-part", message=f"{c.name} carries no monoidal part"
            )
        src, tgt = totals or (cls.grothendieck(c.source), cls.grothendieck(c.target))
        top = cls.groth_1cell(c, src, tgt).top
        psi = part.base_functor
        laxator = {}
        for e1, p in src.objects.items():
            for e2, q in src.objects.items():
                (x, a), (y, b) = p, q
                try:
                    upper = source.g_tensor_obj(p, q)
                    lower = target.g_tensor_obj(c.transport_obj(p), c.transport_obj(q))
                    cell = part.cells[(x, y)][(a, b)]
                    base = psi.phi(x, y)
                except (UnknownObject, KeyError):
                    continue
                laxator[(e1, e2)] = tgt.mor_id(
                    GrothMor(lower, c.transport_obj(upper), base, cell)
                )
        unit = GrothMor(
            target.g_unit(),
            c.transport_obj(source.g_unit()),
            psi.unit_mor,
            part.unit_cell,
        )
        return MonoidalFunctorFactory.build_entity(
            top, laxator, tgt.mor_id(unit), strength="lax", name=f"P_{c.name}"
        )

    @classmethod
    def check_monoidal_groth_1cell(
        cls, c: Indexed1Cell, source: LaxMonoidalIndexed, target: LaxMonoidalIndexed
    ) -> LawReport:
        """
        Checks the monoidal part of τ: ψ on the base, the transported structure on the
        totals, and that the total laxator lies over ψ.
        """
        part = c.monoidal_part
        if part is None:
            raise ShapeMismatch(
                item="no-monoidal-part", message=f"{c.name} carries no monoidal part"
            )
        report = LawReport(subject=f"monoidal 1-cell {c.name}")
        report.merge(
            MonoidalServices.check_monoidal_functor(
                part.base_functor, source.base_monoidal, target.base_monoidal
            ),
            "base",
        )
        src, U = cls.monoidal_total(source)
        tgt, V = cls.monoidal_total(target)
        N = c.target

        report.law("cell-typing")
        for (x, y), cells in sorted(part.cells.items()):
            for (a, b), cell in sorted(cells.items()):
                try:
                    m = GrothMor(
                        target.g_tensor_obj(
                            c.transport_obj((x, a)), c.transport_obj((y, b))
                        ),
                        c.transport_obj(source.g_tensor_obj((x, a), (y, b))),
                        part.base_functor.phi(x, y),
                        cell,
                    )
                except UnknownObject:
                    report.skip("cell-typing")
                    continue
                report.tick()
                if not N.g_typed(m):
                    report.fail(
                        "cell-typing",
                        (x, y, a, b),
                        f"m_{x},{y} at ({a}, {b}) is mistyped",
                    )
        unit = GrothMor(
            target.g_unit(),
            c.transport_obj(source.g_unit()),
            part.base_functor.unit_mor,
            part.unit_cell,
        )
        report.tick()
        if not N.g_typed(unit):
            report.fail("cell-typing", ("unit",), "m_0 is mistyped")
        if not report.passed:
            return report.finish()

        F = cls.monoidal_groth_1cell(c, source, target, (src, tgt))
        report.merge(
            MonoidalServices.check_monoidal_functor(
                F, U.total_monoidal, V.total_monoidal
            ),
            "total",
        )
        Q = tgt.fibration
        for (e1, e2), phi in sorted(F.laxator.items()):
            report.expect(
                "over-base",
                (e1, e2),
                lambda: Q.over_mor(phi),
                lambda: part.base_functor.phi(src.objects[e1][0], src.objects[e2][0]),
            )
        report.expect(
            "over-base",
            ("unit",),
            lambda: Q.over_mor(F.unit_mor),
            lambda: part.base_functor.unit_mor,
        )
        return report.finish()

    @classmethod
    def check_monoidal_groth_2cell(
        cls, c: Indexed2Cell, source: LaxMonoidalIndexed, target: LaxMonoidalIndexed
    ) -> LawReport:
        """The transported modification is a monoidal transformation between the totals."""
        src, U = cls.monoidal_total(source)
        tgt, V = cls.monoidal_total(target)
        F = cls.monoidal_groth_1cell(c.source, source, target, (src, tgt))
        G = cls.monoidal_groth_1cell(c.target, source, target, (src, tgt))
        t = cls.groth_2cell(c, src, tgt).top
        return MonoidalServices.check_monoidal_nat_trans(
            t, F, G, U.total_monoidal, V.total_monoidal
        )
