import logging
from typing import Optional, Type

from fibred.domain.fincat.models import FinFunctorFactory, LawReport, NatTransFactory
from fibred.domain.fincat.services import (
    BifunctorServices,
    FinCatServices,
    FinFunctorServices,
    NatTransServices,
)
from fibred.domain.groth.services import GrothServices
from fibred.domain.moncat.services import MonoidalServices, _triples
from utils.django.exceptions import MalformedTable, ShapeMismatch, UnknownObject

from .models import (
    GrothMor,
    Indexed1Cell,
    Indexed1CellFactory,
    Indexed2Cell,
    Indexed2CellFactory,
    IndexedCat,
    IndexedCatFactory,
    LaxMonoidalIndexed,
    LaxMonoidalIndexedFactory,
)

log = logging.getLogger(__name__)

compose = FinFunctorServices.compose_functors


class IndexedServices:
    """
    Coherence checkers for indexed categories and their lax monoidal structure.

    Methods:
    - get_indexed_factory() -> Type[IndexedCatFactory]
    - check_pseudofunctor(m) -> LawReport
    - check_lax_monoidal(l) -> LawReport
    """

    @staticmethod
    def get_indexed_factory() -> Type[IndexedCatFactory]:
        return IndexedCatFactory

    @staticmethod
    def get_lax_monoidal_factory() -> Type[LaxMonoidalIndexedFactory]:
        return LaxMonoidalIndexedFactory

    @staticmethod
    def check_pseudofunctor(m: IndexedCat) -> LawReport:
        """
        Checks the pseudofunctor data of m exhaustively.

        Laws: fibres are categories, reindexers are functors between the right fibres,
        δ and γ are natural isomorphisms between the right functors, the associativity
        square over every composable triple and both unit squares over every morphism,
        at every fibre object. A strict claim additionally needs identity cells and
        reindexers that compose on the nose.

        Raises:
        - MalformedTable: If a fibre, reindexer, δ or γ entry is missing.
        """
        report = LawReport(subject=f"pseudofunctor {m.name}")
        B = m.base
        for x in B.objects:
            if x not in m.fibre:
                raise MalformedTable(
                    item="missing-fibre", message=f"{m.name}: no fibre over {x}"
                )
            report.merge(FinCatServices.check_category(m.fibre[x]), f"fibre[{x}]")

        report.law("reindex-typing")
        for f in B.mor_ids:
            x, y = B.morphisms[f]
            F = m.fun(f)
            expected = (m.at(x), m.at(y)) if m.covariant else (m.at(y), m.at(x))
            report.tick()
            if (F.source, F.target) != expected:
                report.fail(
                    "reindex-typing", (f,), f"M({f}) runs between the wrong fibres"
                )
                continue
            report.merge(FinFunctorServices.check_functor(F), f"reindex[{f}]")
        if not report.passed:
            return report.finish()

        cells = [
            (
                "compositor",
                (g, f),
                m.compositor.get((g, f)),
                compose(*m.composite_source(g, f)),
                m.fun(B.comp(g, f)),
            )
            for g, f in B.composable_pairs()
        ] + [
            (
                "unitor",
                (x,),
                m.unitor.get(x),
                FinFunctorFactory.build_identity(m.at(x)),
                m.fun(B.id(x)),
            )
            for x in B.objects
        ]
        for label, witness, cell, source, target in cells:
            if cell is None:
                raise MalformedTable(
                    item=f"missing-{label}",
                    message=f"{m.name}: no {label} at {witness}",
                )
            report.law(f"{label}-typing")
            report.tick()
            if cell.source_fun != source or cell.target_fun != target:
                report.fail(
                    f"{label}-typing",
                    witness,
                    f"{label} at {witness} has the wrong ends",
                )
                continue
            section = f"{label}[{','.join(witness)}]"
            report.merge(NatTransServices.check_nat_trans(cell), section)
            report.law(f"{label}-iso")
            if not NatTransServices.is_invertible(cell):
                report.fail(
                    f"{label}-iso", witness, f"{label} at {witness} is not invertible"
                )
        if not report.passed:
            return report.finish()

        for h, g, f in B.composable_triples():
            if m.covariant:
                fibre, gf, hg = m.at(B.cod(h)), B.comp(g, f), B.comp(h, g)
                for a in m.at(B.dom(f)).objects:
                    report.expect(
                        "associativity",
                        (h, g, f, a),
                        lambda: fibre.comp(
                            m.delta(h, gf, a), m.act_mor(h, m.delta(g, f, a))
                        ),
                        lambda: fibre.comp(
                            m.delta(hg, f, a), m.delta(h, g, m.act(f, a))
                        ),
                    )
            else:
                fibre, gf, hg = m.at(B.dom(f)), B.comp(g, f), B.comp(h, g)
                for d in m.at(B.cod(h)).objects:
                    report.expect(
                        "associativity",
                        (h, g, f, d),
                        lambda: fibre.comp(
                            m.delta(hg, f, d), m.act_mor(f, m.delta(h, g, d))
                        ),
                        lambda: fibre.comp(
                            m.delta(h, gf, d), m.delta(g, f, m.act(h, d))
                        ),
                    )

        for f in B.mor_ids:
            x, y = B.morphisms[f]
            one_x, one_y = B.id(x), B.id(y)
            if m.covariant:
                fibre = m.at(y)
                for a in m.at(x).objects:
                    fa = m.act(f, a)
                    report.expect(
                        "right-unit",
                        (f, a),
                        lambda: fibre.comp(
                            m.delta(f, one_x, a), m.act_mor(f, m.gamma(x, a))
                        ),
                        lambda: fibre.id(fa),
                    )
                    report.expect(
                        "left-unit",
                        (f, a),
                        lambda: fibre.comp(m.delta(one_y, f, a), m.gamma(y, fa)),
                        lambda: fibre.id(fa),
                    )
            else:
                fibre = m.at(x)
                for b in m.at(y).objects:
                    fb = m.act(f, b)
                    report.expect(
                        "left-unit",
                        (f, b),
                        lambda: fibre.comp(
                            m.delta(one_y, f, b), m.act_mor(f, m.gamma(y, b))
                        ),
                        lambda: fibre.id(fb),
                    )
                    report.expect(
                        "right-unit",
                        (f, b),
                        lambda: fibre.comp(m.delta(f, one_x, b), m.gamma(x, fb)),
                        lambda: fibre.id(fb),
                    )

        if m.strict:
            IndexedServices._check_strict(m, report)
        return report.finish()

    @staticmethod
    def _check_strict(m: IndexedCat, report: LawReport) -> None:
        B = m.base
        report.law("strict")
        for (g, f), d in m.compositor.items():
            report.tick()
            if compose(*m.composite_source(g, f)) != m.fun(B.comp(g, f)):
                report.fail(
                    "strict",
                    (g, f),
                    f"reindexers along {g} and {f} do not compose on the nose",
                )
            elif not all(map(d.source_fun.target.is_identity, d.components.values())):
                report.fail("strict", (g, f), f"δ at ({g}, {f}) is not an identity")
        for x, c in m.unitor.items():
            report.tick()
            if m.fun(B.id(x)) != FinFunctorFactory.build_identity(m.at(x)):
                report.fail("strict", (x,), f"M(1_{x}) is not the identity")
            elif not all(map(m.at(x).is_identity, c.components.values())):
                report.fail("strict", (x,), f"γ at {x} is not an identity")
        report.note("strict: δ and γ are identities; coherence is functoriality")

    @classmethod
    def check_lax_monoidal(cls, l: LaxMonoidalIndexed) -> LawReport:
        """
        Checks a lax monoidal indexed category.

        Directly checked: the carrier, the base monoidal structure, each μ_{x,y} as a
        bifunctor between the right fibres, typing, invertibility and naturality of the
        μ_{f,g} cells, typing and invertibility of ω, ξ, ζ and v. The remaining coherence
        is checked as the monoidal category laws of the Grothendieck total.

        Raises:
        - ShapeMismatch: If the base monoidal structure lives on another category.
        - MalformedTable: If a cell table lacks an entry where its ends are defined.
        """
        M, T = l.carrier, l.base_monoidal
        if T.base != M.base:
            raise ShapeMismatch(
                item="lax-monoidal-shape",
                message=f"{T.name} is not a structure on {M.base.name}",
            )
        report = LawReport(subject=f"lax monoidal {l.name}")
        report.merge(cls.check_pseudofunctor(M), "carrier")
        report.merge(MonoidalServices.check_monoidal(T), "base")
        if not report.passed:
            return report.finish()

        report.law("laxator-typing")
        for (x, y), xy in T.tensor.obj_map.items():
            mu = l.laxator.get((x, y))
            if mu is None:
                report.skip("laxator-typing")
                continue
            report.tick()
            if (mu.left, mu.right, mu.target) != (M.at(x), M.at(y), M.at(xy)):
                report.fail(
                    "laxator-typing",
                    (x, y),
                    f"μ at ({x}, {y}) runs between the wrong fibres",
                )
                continue
            report.merge(BifunctorServices.check_bifunctor(mu), "laxator")
        report.law("unit-typing")
        report.tick()
        if not M.at(T.unit).has_object(l.unit_obj):
            report.fail(
                "unit-typing", (l.unit_obj,), f"μ_0 is not an object of M({T.unit})"
            )
        if not report.passed:
            return report.finish()

        cls._check_laxator_cells(l, report)
        cls._check_structure_cells(l, report)
        if not report.passed:
            return report.finish()

        total = GrothServices.monoidal_grothendieck(l)
        report.merge(MonoidalServices.check_monoidal(total.total_monoidal), "total")
        report.note(
            "coherence of ω, ξ, ζ and v beyond their shapes is checked as the "
            "monoidal laws of the Grothendieck total"
        )
        return report.finish()

    @staticmethod
    def _check_laxator_cells(l: LaxMonoidalIndexed, report: LawReport) -> None:
        M, T = l.carrier, l.base_monoidal
        B = M.base
        for (f, g), fg in T.tensor.mor_map.items():
            (x, x2), (y, y2) = B.morphisms[f], B.morphisms[g]
            if (x, y) not in l.laxator or (x2, y2) not in l.laxator:
                continue
            ends = l.laxator[(x2, y2)] if not M.covariant else l.laxator[(x, y)]
            for (a, b) in ends.obj_map:
                try:
                    if M.covariant:
                        cell = GrothMor(
                            (T.t(x, y), l.mu(x, y, a, b)),
                            (T.t(x2, y2), l.mu(x2, y2, M.act(f, a), M.act(g, b))),
                            fg,
                            l.mu_cell(f, g, a, b),
                        )
                    else:
                        cell = GrothMor(
                            (T.t(x, y), l.mu(x, y, M.act(f, a), M.act(g, b))),
                            (T.t(x2, y2), l.mu(x2, y2, a, b)),
                            fg,
                            l.mu_cell(f, g, a, b),
                        )
                except UnknownObject:
                    report.skip("laxator-cell-typing")
                    continue
                report.law("laxator-cell-typing")
                report.tick()
                if not M.g_typed(cell):
                    report.fail(
                        "laxator-cell-typing",
                        (f, g, a, b),
                        f"μ_{{{f},{g}}} at ({a}, {b}) has the wrong ends",
                    )
                    continue
                report.law("laxator-cell-iso")
                if not l.home(cell).is_iso(cell.fibre):
                    report.fail(
                        "laxator-cell-iso",
                        (f, g, a, b),
                        f"{cell.fibre} is not invertible",
                    )
        if report.violations:
            return

        # naturality of each μ_{f,g} in each variable, against fibre morphisms
        for (f, g), fg in T.tensor.mor_map.items():
            (x, x2), (y, y2) = B.morphisms[f], B.morphisms[g]
            if (x, y) not in l.laxator or (x2, y2) not in l.laxator:
                continue
            if M.covariant:
                home = M.at(T.t(x2, y2))
                mu, Mfg = l.laxator[(x, y)], M.fun(fg)
                for (a, b) in mu.obj_map:
                    for k in M.at(x).out_of(a):
                        a1 = M.at(x).cod(k)
                        report.expect(
                            "laxator-cell-naturality",
                            (f, g, k, b),
                            lambda: home.comp(
                                l.mu_cell(f, g, a1, b),
                                Mfg.mor(l.mu_mor(x, y, k, M.at(y).id(b))),
                            ),
                            lambda: home.comp(
                                l.mu_mor(
                                    x2,
                                    y2,
                                    M.act_mor(f, k),
                                    M.at(y2).id(M.act(g, b)),
                                ),
                                l.mu_cell(f, g, a, b),
                            ),
                        )
                    for k in M.at(y).out_of(b):
                        b1 = M.at(y).cod(k)
                        report.expect(
                            "laxator-cell-naturality",
                            (f, g, a, k),
                            lambda: home.comp(
                                l.mu_cell(f, g, a, b1),
                                Mfg.mor(l.mu_mor(x, y, M.at(x).id(a), k)),
                            ),
                            lambda: home.comp(
                                l.mu_mor(
                                    x2,
                                    y2,
                                    M.at(x2).id(M.act(f, a)),
                                    M.act_mor(g, k),
                                ),
                                l.mu_cell(f, g, a, b),
                            ),
                        )
            else:
                home = M.at(T.t(x, y))
                mu, Mfg = l.laxator[(x2, y2)], M.fun(fg)
                for (a, b) in mu.obj_map:
                    for k in M.at(x2).out_of(a):
                        a1 = M.at(x2).cod(k)
                        report.expect(
                            "laxator-cell-naturality",
                            (f, g, k, b),
                            lambda: home.comp(
                                l.mu_cell(f, g, a1, b),
                                l.mu_mor(
                                    x,
                                    y,
                                    M.act_mor(f, k),
                                    M.at(y).id(M.act(g, b)),
                                ),
                            ),
                            lambda: home.comp(
                                Mfg.mor(l.mu_mor(x2, y2, k, M.at(y2).id(b))),
                                l.mu_cell(f, g, a, b),
                            ),
                        )
                    for k in M.at(y2).out_of(b):
                        b1 = M.at(y2).cod(k)
                        report.expect(
                            "laxator-cell-naturality",
                            (f, g, a, k),
                            lambda: home.comp(
                                l.mu_cell(f, g, a, b1),
                                l.mu_mor(
                                    x,
                                    y,
                                    M.at(x).id(M.act(f, a)),
                                    M.act_mor(g, k),
                                ),
                            ),
                            lambda: home.comp(
                                Mfg.mor(l.mu_mor(x2, y2, M.at(x2).id(a), k)),
                                l.mu_cell(f, g, a, b),
                            ),
                        )

    @staticmethod
    def _check_structure_cells(l: LaxMonoidalIndexed, report: LawReport) -> None:
        M, T = l.carrier, l.base_monoidal
        B = M.base

        def shape(label, witness, build):
            report.law(f"{label}-typing")
            try:
                cell = build()
            except UnknownObject:
                report.skip(f"{label}-typing")
                return
            except ShapeMismatch:
                report.tick()
                report.fail(
                    f"{label}-iso", witness, f"{label} at {witness} is not invertible"
                )
                return
            report.tick()
            if not M.g_typed(cell):
                report.fail(
                    f"{label}-typing",
                    witness,
                    f"{label} at {witness} has the wrong ends",
                )
            elif not l.home(cell).is_iso(cell.fibre):
                report.fail(
                    f"{label}-iso", witness, f"{label} at {witness} is not invertible"
                )

        for x, y, z in _triples(T):
            for a in M.at(x).objects:
                for b in M.at(y).objects:
                    for c in M.at(z).objects:
                        shape(
                            "omega",
                            (x, y, z, a, b, c),
                            lambda: l.g_alpha((x, a), (y, b), (z, c)),
                        )
        for x in B.objects:
            for a in M.at(x).objects:
                if T.defined(T.unit, x):
                    shape("xi", (x, a), lambda: l.g_lambda((x, a)))
                if T.defined(x, T.unit):
                    shape("zeta", (x, a), lambda: l.g_rho((x, a)))
        if l.braid_cell is not None and T.braiding is not None:
            for (x, y) in T.tensor.obj_map:
                if not T.defined(y, x):
                    continue
                for a in M.at(x).objects:
                    for b in M.at(y).objects:
                        shape(
                            "braid-cell",
                            (x, y, a, b),
                            lambda: l.g_beta((x, a), (y, b)),
                        )


class Indexed1CellServices:
    """
    Indexed 1-cells (pseudonatural transformations) and 2-cells (modifications).

    Methods:
    - check_indexed_1cell(c, source_monoidal=None, target_monoidal=None) -> LawReport
    - check_indexed_2cell(c) -> LawReport
    - identity_1cell(m), inclusion_1cell(m, n, F), compose_1cells(sigma, tau)
    - identity_2cell(c), vertical_compose_2cells(n, m)
    """

    @staticmethod
    def get_1cell_factory() -> Type[Indexed1CellFactory]:
        return Indexed1CellFactory

    @staticmethod
    def get_2cell_factory() -> Type[Indexed2CellFactory]:
        return Indexed2CellFactory

    @staticmethod
    def square_ends(c: Indexed1Cell, f: str):
        """(source, target) functors of τ_f."""
        M, N = c.source, c.target
        x, y = M.base.morphisms[f]
        Nf = N.fun(c.base_fun.mor(f))
        if M.covariant:
            return compose(Nf, c.tau(x)), compose(c.tau(y), M.fun(f))
        return compose(c.tau(x), M.fun(f)), compose(Nf, c.tau(y))

    @classmethod
    def check_indexed_1cell(
        cls,
        c: Indexed1Cell,
        source_monoidal: Optional[LaxMonoidalIndexed] = None,
        target_monoidal: Optional[LaxMonoidalIndexed] = None,
    ) -> LawReport:
        """
        Checks τ: M ⇒ N over F.

        Laws: F is a functor; each τ_x a functor M x -> N(F x); each τ_f a natural
        isomorphism between the right composites; compatibility of the τ_f with δ over
        every composable pair and with γ at every object. With lax monoidal endpoints,
        the monoidal part is checked through its transport to the totals.

        Raises:
        - ShapeMismatch: If F or the variances do not match the endpoints.
        """
        M, N, F = c.source, c.target, c.base_fun
        if F.source != M.base or F.target != N.base or M.variance != N.variance:
            raise ShapeMismatch(
                item="indexed-1cell-shape",
                message=f"{c.name} does not run {M.name} => {N.name}",
            )
        report = LawReport(subject=f"indexed 1-cell {c.name}")
        report.merge(FinFunctorServices.check_functor(F), "base")
        report.law("component-typing")
        for x in M.base.objects:
            tau = c.tau(x)
            report.tick()
            if tau.source != M.at(x) or tau.target != N.at(F.obj(x)):
                report.fail(
                    "component-typing", (x,), f"τ_{x} runs between the wrong fibres"
                )
                continue
            report.merge(FinFunctorServices.check_functor(tau), f"component[{x}]")
        if not report.passed:
            return report.finish()

        for f in M.base.mor_ids:
            source, target = cls.square_ends(c, f)
            square = c.squares.get(f)
            if square is None:
                raise MalformedTable(
                    item="missing-square", message=f"{c.name}: no square at {f}"
                )
            report.law("square-typing")
            report.tick()
            if square.source_fun != source or square.target_fun != target:
                report.fail("square-typing", (f,), f"τ_{f} has the wrong ends")
                continue
            report.merge(NatTransServices.check_nat_trans(square), f"square[{f}]")
            report.law("square-iso")
            if not NatTransServices.is_invertible(square):
                report.fail("square-iso", (f,), f"τ_{f} is not invertible")
        if not report.passed:
            return report.finish()

        B = M.base
        for g, f in B.composable_pairs():
            if M.covariant:
                firsts = [M.g_lift(f, a) for a in M.at(B.dom(f)).objects]
                pairs = [(M.g_lift(g, h.target[1]), h) for h in firsts]
            else:
                seconds = [M.g_lift(g, e) for e in M.at(B.cod(g)).objects]
                pairs = [(h, M.g_lift(f, h.source[1])) for h in seconds]
            for second, first in pairs:
                report.expect(
                    "pseudonaturality-composite",
                    (g, f, first.source[1]),
                    lambda: c.transport(M.g_comp(second, first)),
                    lambda: N.g_comp(c.transport(second), c.transport(first)),
                )
        for x in B.objects:
            for a in M.at(x).objects:
                report.expect(
                    "pseudonaturality-unit",
                    (x, a),
                    lambda: c.transport(M.g_id(x, a)),
                    lambda: N.g_id(*c.transport_obj((x, a))),
                )

        if c.monoidal_part is not None:
            if source_monoidal is None or target_monoidal is None:
                report.note("monoidal part unchecked: no lax monoidal endpoints given")
            else:
                report.merge(
                    GrothServices.check_monoidal_groth_1cell(
                        c, source_monoidal, target_monoidal
                    ),
                    "monoidal",
                )
        return report.finish()

    @staticmethod
    def modification_ends(c: Indexed2Cell, x: str):
        """(source, target) functors of m_x."""
        tau, sigma = c.source, c.target
        N = tau.target
        reindex = N.fun(c.base_nat.at(x))
        if N.covariant:
            return compose(reindex, tau.tau(x)), sigma.tau(x)
        return tau.tau(x), compose(reindex, sigma.tau(x))

    @classmethod
    def check_indexed_2cell(cls, c: Indexed2Cell) -> LawReport:
        """
        Checks a modification m: τ ⇛ σ above α.

        Laws: α is natural; each m_x is natural between the right functors; for every base
        morphism f and every canonical lift h over f, P_σ(h)∘(α, m)_{dom h} equals
        (α, m)_{cod h}∘P_τ(h) in the target total.

        Raises:
        - ShapeMismatch: If the 1-cells are not parallel or α does not run between their
            base functors.
        """
        tau, sigma, alpha = c.source, c.target, c.base_nat
        if (
            tau.source != sigma.source
            or tau.target != sigma.target
            or alpha.source_fun != tau.base_fun
            or alpha.target_fun != sigma.base_fun
        ):
            raise ShapeMismatch(
                item="indexed-2cell-shape",
                message=f"{c.name} does not run between parallel 1-cells over α",
            )
        M, N = tau.source, tau.target
        report = LawReport(subject=f"indexed 2-cell {c.name}")
        report.merge(NatTransServices.check_nat_trans(alpha), "base")
        for x in M.base.objects:
            source, target = cls.modification_ends(c, x)
            m_x = c.modification.get(x)
            if m_x is None:
                raise MalformedTable(
                    item="missing-modification",
                    message=f"{c.name}: no component at {x}",
                )
            report.law("modification-typing")
            report.tick()
            if m_x.source_fun != source or m_x.target_fun != target:
                report.fail("modification-typing", (x,), f"m_{x} has the wrong ends")
                continue
            report.merge(NatTransServices.check_nat_trans(m_x), f"modification[{x}]")
        if not report.passed:
            return report.finish()

        for f in M.base.mor_ids:
            x, y = M.base.morphisms[f]
            ends = M.at(x).objects if M.covariant else M.at(y).objects
            for e in ends:
                h = M.g_lift(f, e)
                report.expect(
                    "modification-axiom",
                    (f, e),
                    lambda: N.g_comp(sigma.transport(h), c.component(h.source)),
                    lambda: N.g_comp(c.component(h.target), tau.transport(h)),
                )
        return report.finish()

    @staticmethod
    def identity_1cell(m: IndexedCat) -> Indexed1Cell:
        return Indexed1CellFactory.build_identity(m)

    @staticmethod
    def inclusion_1cell(
        m: IndexedCat, n: IndexedCat, base_fun=None, name: str = ""
    ) -> Indexed1Cell:
        """Inclusion of a smaller universe m into n: object-identical fibres and reindexers."""
        if base_fun is None:
            base_fun = FinFunctorFactory.build_entity(
                m.base,
                n.base,
                {x: x for x in m.base.objects},
                {f: f for f in m.base.morphisms},
                name="ι",
            )
        return Indexed1CellFactory.build_inclusion(
            m, n, base_fun, name=name or f"{m.name} ⊆ {n.name}"
        )

    @classmethod
    def compose_1cells(cls, sigma: Indexed1Cell, tau: Indexed1Cell) -> Indexed1Cell:
        """σ∘τ for τ: M ⇒ N over F and σ: N ⇒ L over G."""
        if tau.target != sigma.source:
            raise ShapeMismatch(
                item="1cell-composition",
                message=f"{sigma.name}∘{tau.name}: middle indexed categories differ",
            )
        M, L = tau.source, sigma.target
        F, G = tau.base_fun, sigma.base_fun
        components = {
            x: compose(sigma.tau(F.obj(x)), tau.tau(x)) for x in M.base.objects
        }
        draft = Indexed1CellFactory.build_entity(M, L, compose(G, F), components, {})
        squares = {}
        for f in M.base.mor_ids:
            x, y = M.base.morphisms[f]
            source, target = cls.square_ends(draft, f)
            Ff = F.mor(f)
            if M.covariant:
                home = L.at(G.obj(F.obj(y)))
                table = {
                    a: home.comp(
                        sigma.tau(F.obj(y)).mor(tau.square(f, a)),
                        sigma.square(Ff, tau.tau(x).obj(a)),
                    )
                    for a in M.at(x).objects
                }
            else:
                home = L.at(G.obj(F.obj(x)))
                table = {
                    b: home.comp(
                        sigma.square(Ff, tau.tau(y).obj(b)),
                        sigma.tau(F.obj(x)).mor(tau.square(f, b)),
                    )
                    for b in M.at(y).objects
                }
            squares[f] = NatTransFactory.build_entity(
                source, target, table, name=f"(στ)_{f}"
            )
        return Indexed1CellFactory.build_entity(
            M, L, draft.base_fun, components, squares, name=f"{sigma.name}∘{tau.name}"
        )

    @staticmethod
    def identity_2cell(c: Indexed1Cell) -> Indexed2Cell:
        return Indexed2CellFactory.build_identity(c)

    @classmethod
    def vertical_compose_2cells(cls, n: Indexed2Cell, m: Indexed2Cell) -> Indexed2Cell:
        """n·m for m: τ ⇛ σ above α and n: σ ⇛ ρ above β, composed in the target total."""
        if m.target != n.source:
            raise ShapeMismatch(
                item="2cell-composition",
                message=f"{n.name}·{m.name}: middle 1-cells differ",
            )
        alpha = NatTransServices.vertical_compose(n.base_nat, m.base_nat)
        N = m.source.target
        draft = Indexed2CellFactory.build_entity(m.source, n.target, alpha, {})
        modification = {}
        for x in m.source.source.base.objects:
            source, target = cls.modification_ends(draft, x)
            modification[x] = NatTransFactory.build_entity(
                source,
                target,
                {
                    a: N.g_comp(n.component((x, a)), m.component((x, a))).fibre
                    for a in source.source.objects
                },
                name=f"(n·m)_{x}",
            )
        return Indexed2CellFactory.build_entity(
            m.source, n.target, alpha, modification, name=f"{n.name}·{m.name}"
        )
