import logging
from dataclasses import replace
from typing import Dict, Optional, Tuple, Type

from fibred.domain.fincat.models import (
    FinCat,
    FinCatFactory,
    FinFunctor,
    FinFunctorFactory,
    LawReport,
)
from fibred.domain.fincat.services import FinFunctorServices, NatTransServices
from fibred.domain.moncat.models import MonoidalFunctorFactory
from fibred.domain.moncat.services import MonoidalServices
from utils.django.exceptions import (
    MissingLift,
    NotUniversal,
    ShapeMismatch,
    UnknownObject,
)

from .models import (
    ClovenFibration,
    ClovenFibrationFactory,
    Fibred1Cell,
    Fibred2Cell,
    FibredCellFactory,
    MonoidalFibrationData,
)

log = logging.getLogger(__name__)


class FibrationServices:
    """
    Decision procedures and checkers for cloven (op)fibrations between finite categories.

    Methods:
    - cartesian_witness(p, phi) -> Optional[tuple]; is_cartesian(p, phi) -> bool
    - factor_through(p, phi, theta, over) -> str
    - check_fibration(p) -> LawReport; is_split(p) -> bool
    - fibre(p, x) -> FinCat; reindex(p, f) -> FinFunctor
    - synthesize_cleavage(p) -> ClovenFibration
    - check_fibred_1cell(c) -> LawReport; check_fibred_2cell(c) -> LawReport
    - check_monoidal_fibration(m) -> LawReport
    """

    @staticmethod
    def get_fibration_factory() -> Type[ClovenFibrationFactory]:
        return ClovenFibrationFactory

    @staticmethod
    def get_cell_factory() -> Type[FibredCellFactory]:
        return FibredCellFactory

    @staticmethod
    def cartesian_witness(p: ClovenFibration, phi: str) -> Optional[tuple]:
        """
        Searches for a competitor that breaks the universal property of phi.

        For a fibration and phi: e -> b over f: x -> y, every θ: e'' -> b over f∘g must
        factor as phi∘ψ for exactly one ψ over g. Opfibrations use the dual property.

        Returns:
        - Optional[tuple]: (θ, g, number of factorizations) for the first failure, or None.
        """
        E, B, P = p.total, p.base, p.proj
        e, b = E.morphisms[phi]
        f = P.mor(phi)
        x, y = B.morphisms[f]
        for other in E.objects:
            counts: Dict[Tuple[str, str], int] = {}
            if p.opfibration:
                for psi in E.hom(b, other):
                    key = (P.mor(psi), E.comp(psi, phi))
                    counts[key] = counts.get(key, 0) + 1
                for theta in E.hom(e, other):
                    for g in B.hom(y, P.obj(other)):
                        if B.comp(g, f) != P.mor(theta):
                            continue
                        found = counts.get((g, theta), 0)
                        if found != 1:
                            return theta, g, found
            else:
                for psi in E.hom(other, e):
                    key = (P.mor(psi), E.comp(phi, psi))
                    counts[key] = counts.get(key, 0) + 1
                for theta in E.hom(other, b):
                    for g in B.hom(P.obj(other), x):
                        if B.comp(f, g) != P.mor(theta):
                            continue
                        found = counts.get((g, theta), 0)
                        if found != 1:
                            return theta, g, found
        return None

    @classmethod
    def is_cartesian(cls, p: ClovenFibration, phi: str) -> bool:
        return cls.cartesian_witness(p, phi) is None

    @staticmethod
    def factor_through(p: ClovenFibration, phi: str, theta: str, over: str) -> str:
        """
        The unique ψ over `over` with phi∘ψ = theta (fibration) or ψ∘phi = theta (opfibration).

        Raises:
        - NotUniversal: If zero or several morphisms factor theta.
        """
        E, P = p.total, p.proj
        if p.opfibration:
            found = [
                psi
                for psi in E.hom(E.cod(phi), E.cod(theta))
                if P.mor(psi) == over and E.comp(psi, phi) == theta
            ]
        else:
            found = [
                psi
                for psi in E.hom(E.dom(theta), E.dom(phi))
                if P.mor(psi) == over and E.comp(phi, psi) == theta
            ]
        if len(found) != 1:
            raise NotUniversal(
                item="not-universal",
                message=f"{len(found)} factorizations of {theta} via {phi} over {over}",
            )
        return found[0]

    @classmethod
    def check_fibration(cls, p: ClovenFibration) -> LawReport:
        """
        Checks the projection, the cleavage and, when claimed, splitness.

        Every missing lift is reported rather than only the first, so that non-fibrations
        give a full diagnosis. Each entry must lie over its base morphism, end (start, for
        opfibrations) at its object and be (co)cartesian.
        """
        report = LawReport(subject=f"{p.direction} {p.name}")
        report.merge(FinFunctorServices.check_functor(p.proj), "proj")
        if not report.passed:
            return report.finish()
        E, P = p.total, p.proj

        report.law("cleavage")
        keys = p.lift_keys()
        key_set = set(keys)
        for f, e in keys:
            report.tick()
            if (f, e) not in p.cleavage:
                report.fail(
                    "cleavage", (f, e), f"no chosen lift of {f} at {e}", every=True
                )
        for key in sorted(set(p.cleavage) - key_set):
            report.fail(
                "cleavage", key, f"lift at {key} does not match a base morphism"
            )

        report.law("lift-typing")
        typed = []
        for (f, e), k in sorted(p.cleavage.items()):
            if (f, e) not in key_set:
                continue
            report.tick()
            if k not in E.morphisms or P.mor(k) != f:
                report.fail("lift-typing", (f, e), f"{k} does not lie over {f}")
            elif (E.dom(k) if p.opfibration else E.cod(k)) != e:
                report.fail("lift-typing", (f, e), f"{k} does not meet {e}")
            else:
                typed.append((f, e, k))

        law = "cocartesian" if p.opfibration else "cartesian"
        report.law(law)
        for f, e, k in typed:
            report.tick()
            witness = cls.cartesian_witness(p, k)
            if witness is not None:
                theta, g, found = witness
                report.fail(
                    law,
                    (f, e, theta),
                    f"{k}: {theta} over {g} has {found} factorizations",
                )

        if p.split and report.passed:
            cls._split_laws(p, report)
        return report.finish()

    @staticmethod
    def _split_laws(p: ClovenFibration, report: LawReport) -> None:
        E, B = p.total, p.base
        for x in B.objects:
            for e in p.objects_over(x):
                report.expect(
                    "split-identity",
                    (x, e),
                    lambda: p.lift(B.id(x), e),
                    lambda: E.id(e),
                )
        for g, f in B.composable_pairs():
            if p.opfibration:
                for e in p.objects_over(B.dom(f)):
                    report.expect(
                        "split-composition",
                        (g, f, e),
                        lambda: p.lift(B.comp(g, f), e),
                        lambda: E.comp(p.lift(g, p.lift_end(f, e)), p.lift(f, e)),
                    )
            else:
                for e in p.objects_over(B.cod(g)):
                    report.expect(
                        "split-composition",
                        (g, f, e),
                        lambda: p.lift(B.comp(g, f), e),
                        lambda: E.comp(p.lift(g, e), p.lift(f, p.lift_end(g, e))),
                    )

    @classmethod
    def is_split(cls, p: ClovenFibration) -> bool:
        report = LawReport(subject=f"split {p.name}")
        try:
            cls._split_laws(p, report)
        except MissingLift:
            return False
        return report.passed

    @staticmethod
    def fibre(p: ClovenFibration, x: str) -> FinCat:
        """
        The subcategory of objects over x and morphisms over 1_x.

        Raises:
        - UnknownObject: If x is not a base object.
        """
        one = p.base.id(x)
        E = p.total
        objects = list(p.objects_over(x))
        morphisms = {k: E.morphisms[k] for k in E.mor_ids if p.over_mor(k) == one}
        return FinCatFactory.build_entity(
            objects=objects,
            morphisms=morphisms,
            identity={e: E.id(e) for e in objects},
            compose={
                (g, f): h
                for (g, f), h in E.compose.items()
                if f in morphisms and g in morphisms
            },
            name=f"{p.name}|{x}",
        )

    @classmethod
    def reindex(cls, p: ClovenFibration, f: str) -> FinFunctor:
        """
        f*: fibre(cod f) -> fibre(dom f) for a fibration, f_!: fibre(dom f) -> fibre(cod f)
        for an opfibration, computed from the cleavage by unique vertical factorization.

        Raises:
        - MissingLift: If the cleavage does not cover f.
        - NotUniversal: If a chosen lift fails to factor a morphism uniquely.
        """
        x, y = p.base.morphisms[f]
        E = p.total
        src, tgt = (x, y) if p.opfibration else (y, x)
        source, target = cls.fibre(p, src), cls.fibre(p, tgt)
        one = p.base.id(tgt)
        mor_map = {}
        for k, (a, a2) in source.morphisms.items():
            if p.opfibration:
                theta = E.comp(p.lift(f, a2), k)
                mor_map[k] = cls.factor_through(p, p.lift(f, a), theta, one)
            else:
                theta = E.comp(k, p.lift(f, a))
                mor_map[k] = cls.factor_through(p, p.lift(f, a2), theta, one)
        return FinFunctorFactory.build_entity(
            source,
            target,
            {a: p.lift_end(f, a) for a in source.objects},
            mor_map,
            name=f"{f}_!" if p.opfibration else f"{f}*",
        )

    @classmethod
    def synthesize_cleavage(cls, p: ClovenFibration) -> ClovenFibration:
        """
        Chooses, for every (f, e), the least (co)cartesian morphism in identifier order.

        Keys with no (co)cartesian lift stay empty, so check_fibration reports them.
        """
        E, P = p.total, p.proj
        cleavage = {}
        for f, e in p.lift_keys():
            pool = E.out_of(e) if p.opfibration else E.into(e)
            for k in pool:
                if P.mor(k) == f and cls.is_cartesian(p, k):
                    cleavage[(f, e)] = k
                    break
            else:
                log.debug("%s: no lift of %s at %s", p.name, f, e)
        cloven = replace(p, cleavage=cleavage, split=False)
        return replace(cloven, split=cls.is_split(cloven))

    # ----- Fibred cells

    @classmethod
    def check_fibred_1cell(cls, c: Fibred1Cell) -> LawReport:
        """
        Checks Q∘H = F∘P as tables and that H sends chosen lifts to (co)cartesian morphisms.

        Chosen lifts suffice: every (co)cartesian morphism is a chosen lift composed with a
        vertical isomorphism, and H preserves those.

        Raises:
        - ShapeMismatch: If the functors do not run between the fibrations' categories.
        """
        P, Q, H, F = c.source, c.target, c.top, c.bottom
        if not (
            H.source == P.total
            and H.target == Q.total
            and F.source == P.base
            and F.target == Q.base
            and P.direction == Q.direction
        ):
            raise ShapeMismatch(
                item="fibred-1cell-shape",
                message=f"{c.name} does not run {P.name} -> {Q.name}",
            )
        report = LawReport(subject=f"fibred 1-cell {c.name}")
        report.merge(FinFunctorServices.check_functor(H), "top")
        report.merge(FinFunctorServices.check_functor(F), "bottom")
        if not report.passed:
            return report.finish()

        for e in P.total.objects:
            report.expect(
                "square", (e,), lambda: Q.over(H.obj(e)), lambda: F.obj(P.over(e))
            )
        for k in P.total.mor_ids:
            report.expect(
                "square",
                (k,),
                lambda: Q.over_mor(H.mor(k)),
                lambda: F.mor(P.over_mor(k)),
            )
        if not report.passed:
            return report.finish()

        for (f, e), k in sorted(P.cleavage.items()):
            report.expect(
                "preserves-lifts",
                (f, e),
                lambda: cls.is_cartesian(Q, H.mor(k)),
                lambda: True,
                f"H({k}) is not {'cocartesian' if Q.opfibration else 'cartesian'}",
            )
        return report.finish()

    @staticmethod
    def check_fibred_2cell(c: Fibred2Cell) -> LawReport:
        """
        Checks that β: H ⇒ K and α: F ⇒ G are natural and that β lies above α.

        Raises:
        - ShapeMismatch: If the cells do not join the two fibred 1-cells.
        """
        S, T = c.source, c.target
        beta, alpha = c.top, c.bottom
        if not (
            S.source == T.source
            and S.target == T.target
            and beta.source_fun == S.top
            and beta.target_fun == T.top
            and alpha.source_fun == S.bottom
            and alpha.target_fun == T.bottom
        ):
            raise ShapeMismatch(
                item="fibred-2cell-shape",
                message=f"{c.name} does not run {S.name} => {T.name}",
            )
        report = LawReport(subject=f"fibred 2-cell {c.name}")
        report.merge(NatTransServices.check_nat_trans(beta), "top")
        report.merge(NatTransServices.check_nat_trans(alpha), "bottom")
        if not report.passed:
            return report.finish()
        P, Q = S.source, S.target
        for e in P.total.objects:
            report.expect(
                "above",
                (e,),
                lambda: Q.over_mor(beta.at(e)),
                lambda: alpha.at(P.over(e)),
            )
        return report.finish()

    # ----- Monoidal fibrations

    @classmethod
    def check_monoidal_fibration(cls, m: MonoidalFibrationData) -> LawReport:
        """
        Checks that P is strict monoidal and that ⊗ on the total preserves chosen lifts.

        Strictness runs through check_monoidal_functor with identity laxator, which reduces
        its coherence axioms to equality of tensor, associator, unitor and braiding tables
        through P. For every pair of chosen lifts the tensor must be (co)cartesian and must
        differ from the chosen lift of the tensor by a vertical isomorphism.

        Raises:
        - ShapeMismatch: If the monoidal structures do not live on total and base.
        """
        p, U, X = m.carrier, m.total_monoidal, m.base_monoidal
        if U.base != p.total or X.base != p.base:
            raise ShapeMismatch(
                item="monoidal-fibration-shape",
                message=f"{m.name}: monoidal structures do not match {p.name}",
            )
        report = LawReport(subject=f"monoidal {p.direction} {m.name}")
        report.merge(cls.check_fibration(p), "carrier")
        if not report.passed:
            return report.finish()

        B, E, P = p.base, p.total, p.proj
        strict = MonoidalFunctorFactory.build_entity(
            P,
            {(a, b): B.id(P.obj(ab)) for (a, b), ab in U.tensor.obj_map.items()},
            B.id(P.obj(U.unit)),
            strength="strict",
            name=f"{p.name} strict",
        )
        report.merge(
            MonoidalServices.check_monoidal_functor(strict, U, X), "projection"
        )
        if not report.passed:
            return report.finish()

        law = "tensor-preserves-lifts"
        report.law(law)
        lifts = sorted(p.cleavage.items())
        for (f, e), k in lifts:
            for (g, e2), l in lifts:
                try:
                    kl = U.tm(k, l)
                except UnknownObject:
                    report.skip(law)
                    continue
                report.tick()
                if not cls.is_cartesian(p, kl):
                    report.fail(law, (k, l), f"{k}⊗{l} = {kl} is not (co)cartesian")
                    continue
                fg = P.mor(kl)
                end = U.t(e, e2)
                try:
                    chosen = p.lift(fg, end)
                    one = B.id(P.obj(E.cod(kl) if p.opfibration else E.dom(kl)))
                    psi = cls.factor_through(p, chosen, kl, one)
                except (MissingLift, NotUniversal) as error:
                    report.fail("lift-comparison", (k, l), error.message)
                    continue
                report.law("lift-comparison")
                report.tick()
                if not E.is_iso(psi):
                    report.fail("lift-comparison", (k, l), f"{psi} is not invertible")
        return report.finish()
