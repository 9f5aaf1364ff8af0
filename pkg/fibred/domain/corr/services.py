import logging
from dataclasses import replace
from typing import Type

from fibred.domain.fincat.models import FinCat, FinFunctorFactory, LawReport
from fibred.domain.fincat.services import BifunctorServices
from fibred.domain.groth.services import GrothServices
from fibred.domain.indexed.models import (
    GrothMor,
    Indexed1CellFactory,
    LaxMonoidalIndexed,
    LaxMonoidalIndexedFactory,
    MonoidalPart,
)
from fibred.domain.indexed.services import IndexedServices
from fibred.domain.moncat.models import (
    CocartesianWitness,
    MonoidalData,
    MonoidalFactory,
    MonoidalFunctorFactory,
)
from fibred.domain.moncat.services import CocartesianServices, MonoidalServices
from utils.django.exceptions import (
    BaseNotCocartesian,
    MalformedTable,
    NotUniversal,
    ShapeMismatch,
    UnknownObject,
)

from .models import (
    CocartTotalCriterion,
    FibrewiseMonoidal,
    FibrewiseMonoidalFactory,
)

log = logging.getLogger(__name__)


def _bang(w: CocartesianWitness, x: str) -> str:
    try:
        return w.bang[x]
    except KeyError:
        raise UnknownObject(
            item="unknown-object", message=f"{w.name}: no morphism 0 -> {x}"
        )


def _on_the_nose(l: LaxMonoidalIndexed) -> bool:
    """Strict carrier and identity laxator cells: an ordinary lax monoidal functor."""
    M, B = l.carrier, l.base
    if not M.strict:
        return False
    for (f, g), table in l.laxator_cells.items():
        home = M.at(l.base_monoidal.t(B.cod(f), B.cod(g)))
        if not all(map(home.is_identity, table.values())):
            return False
    return True


def _vertical(theta: GrothMor, lam: GrothMor, home: FinCat) -> str:
    """
    The fibre morphism h with (1, h)∘lam = theta, for lam cocartesian over the same base
    morphism as theta: h = k_theta∘k_lam^-1.

    Raises:
    - NotUniversal: If the ends disagree or lam is not cocartesian.
    """
    if theta.source != lam.source or theta.base != lam.base:
        raise NotUniversal(
            item="not-universal",
            message=f"{theta.base} and {lam.base} from {theta.source} do not agree",
        )
    if not home.is_iso(lam.fibre):
        raise NotUniversal(
            item="not-universal", message=f"{lam.fibre} is not invertible"
        )
    return home.comp(theta.fibre, home.inverse(lam.fibre))


class CorrServices:
    """
    Transfer between global and fibrewise monoidal structure over a cocartesian base.

    Covariant data only. Cocartesianness is always certified by a CocartesianWitness
    whose tables coincide with the base monoidal structure.

    Methods:
    - global_to_fibrewise(l, w) -> FibrewiseMonoidal
    - fibrewise_to_global(f, w) -> LaxMonoidalIndexed
    - check_fibrewise(f) -> LawReport
    - roundtrip_transfer(subject, w, check_input=False) -> LawReport
    - strictness_analysis(l, w) -> LawReport
    - search_criterion(l, w) -> CocartTotalCriterion
    - check_cocartesian_total(l, crit, w) -> LawReport
    """

    @staticmethod
    def get_fibrewise_factory() -> Type[FibrewiseMonoidalFactory]:
        return FibrewiseMonoidalFactory

    @staticmethod
    def _require(l_base: MonoidalData, w: CocartesianWitness, covariant: bool) -> None:
        if not covariant:
            raise ShapeMismatch(
                item="variance",
                message="monoidal transfer needs covariant (opindexed) data",
            )
        T, W = l_base, w.monoidal
        if (
            T.base != W.base
            or T.tensor.obj_map != W.tensor.obj_map
            or T.tensor.mor_map != W.tensor.mor_map
            or T.unit != W.unit
        ):
            raise BaseNotCocartesian(
                item="base-not-cocartesian",
                message=f"{T.name} does not agree with the coproducts of {w.name}",
            )

    # ----- Global to fibrewise

    @classmethod
    def global_to_fibrewise(
        cls, l: LaxMonoidalIndexed, w: CocartesianWitness
    ) -> FibrewiseMonoidal:
        """
        ⊗_x = M(∇_x)∘μ_{x,x} and I_x = M(!_x) μ_0, with structure isos and the strong
        structure of each M f read off the total by factoring through cocartesian lifts.

        Raises:
        - BaseNotCocartesian: If the base monoidal structure is not the one of w.
        - ShapeMismatch: If l is contravariant.
        """
        M = l.carrier
        cls._require(l.base_monoidal, w, M.covariant)
        per_fibre, skipped = {}, []
        for x in M.base.objects:
            try:
                per_fibre[x] = cls._fibre_structure(l, w, x)
            except UnknownObject as error:
                skipped.append(x)
                log.debug("fibre over %s skipped: %s", x, error.message)
        reindex_monoidal = {}
        for f in M.base.mor_ids:
            x, y = M.base.morphisms[f]
            if x in per_fibre and y in per_fibre:
                reindex_monoidal[f] = cls._reindex_structure(l, w, f, per_fibre)
        return FibrewiseMonoidalFactory.build_entity(
            M, per_fibre, reindex_monoidal, tuple(skipped), base_monoidal=w.monoidal
        )

    @staticmethod
    def _fibre_structure(
        l: LaxMonoidalIndexed, w: CocartesianWitness, x: str
    ) -> MonoidalData:
        M = l.carrier
        fibre = M.at(x)
        nabla = w.nabla(x)
        lift, ident = M.g_lift, M.g_id
        tensor = BifunctorServices.postcompose(
            M.fun(nabla), l.laxator_at(x, x), name=f"⊗_{x}"
        )
        unit = M.act(_bang(w, x), l.unit_obj)
        u = lift(_bang(w, x), l.unit_obj)

        def collapse(a, b):
            return lift(nabla, l.mu(x, x, a, b))

        associator = {}
        for (a, b), ab in tensor.obj_map.items():
            for c in fibre.objects:
                if not (tensor.defined(ab, c) and tensor.defined(b, c)):
                    continue
                bc = tensor.obj(b, c)
                if not tensor.defined(a, bc):
                    continue
                left = M.g_comp(
                    collapse(ab, c), l.g_tensor(collapse(a, b), ident(x, c))
                )
                right = M.g_comp(
                    collapse(a, bc), l.g_tensor(ident(x, a), collapse(b, c))
                )
                theta = M.g_comp(right, l.g_alpha((x, a), (x, b), (x, c)))
                associator[(a, b, c)] = _vertical(theta, left, fibre)
        left_unitor, right_unitor = {}, {}
        for a in fibre.objects:
            if tensor.defined(unit, a):
                lam = M.g_comp(collapse(unit, a), l.g_tensor(u, ident(x, a)))
                left_unitor[a] = _vertical(l.g_lambda((x, a)), lam, fibre)
            if tensor.defined(a, unit):
                lam = M.g_comp(collapse(a, unit), l.g_tensor(ident(x, a), u))
                right_unitor[a] = _vertical(l.g_rho((x, a)), lam, fibre)
        braiding = None
        if l.braid_cell is not None and l.base_monoidal.braiding is not None:
            braiding = {}
            for (a, b) in tensor.obj_map:
                if tensor.defined(b, a):
                    theta = M.g_comp(collapse(b, a), l.g_beta((x, a), (x, b)))
                    braiding[(a, b)] = _vertical(theta, collapse(a, b), fibre)
        log.debug("fibre %s: %d objects", x, len(fibre.objects))
        return MonoidalFactory.build_entity(
            fibre,
            tensor,
            unit,
            associator,
            left_unitor,
            right_unitor,
            braiding=braiding,
            symmetric=l.base_monoidal.symmetric and braiding is not None,
            name=f"(M {x}, ⊗_{x})",
        )

    @staticmethod
    def _reindex_structure(l, w, f, per_fibre):
        M = l.carrier
        x, y = M.base.morphisms[f]
        home = M.at(y)
        lift = M.g_lift
        source = per_fibre[x]
        laxator = {}
        for (a, b), ab in source.tensor.obj_map.items():
            through_x = M.g_comp(lift(f, ab), lift(w.nabla(x), l.mu(x, x, a, b)))
            fa, fb = M.act(f, a), M.act(f, b)
            through_y = M.g_comp(
                lift(w.nabla(y), l.mu(y, y, fa, fb)),
                l.g_tensor(lift(f, a), lift(f, b)),
            )
            laxator[(a, b)] = _vertical(through_x, through_y, home)
        unit_mor = _vertical(
            M.g_comp(lift(f, source.unit), lift(_bang(w, x), l.unit_obj)),
            lift(_bang(w, y), l.unit_obj),
            home,
        )
        cells = list(laxator.values()) + [unit_mor]
        strength = "strict" if all(map(home.is_identity, cells)) else "strong"
        return MonoidalFunctorFactory.build_entity(
            M.fun(f), laxator, unit_mor, strength=strength, name=f"M{f}"
        )

    @staticmethod
    def check_fibrewise(f: FibrewiseMonoidal) -> LawReport:
        """Each fibre structure is monoidal and each M f strong monoidal between fibres."""
        report = LawReport(subject=f"fibrewise {f.name}")
        B = f.carrier.base
        for x, data in sorted(f.per_fibre.items()):
            report.merge(MonoidalServices.check_monoidal(data), f"fibre[{x}]")
        for g, data in sorted(f.reindex_monoidal.items()):
            x, y = B.morphisms[g]
            report.merge(
                MonoidalServices.check_monoidal_functor(
                    data, f.per_fibre[x], f.per_fibre[y]
                ),
                f"reindex[{g}]",
            )
        for x in f.skipped:
            report.note(f"fibre over {x}: structure needs tensors outside the universe")
        return report.finish()

    # ----- Fibrewise to global

    @classmethod
    def fibrewise_to_global(
        cls, f: FibrewiseMonoidal, w: CocartesianWitness
    ) -> LaxMonoidalIndexed:
        """
        μ_{x,y}(a, b) = M(ι_x) a ⊗_{x+y} M(ι_y) b and μ_0 = I_0; every structure cell is
        the coherent rebracketing through the strong structure of the reindexers.

        Raises:
        - BaseNotCocartesian: If the initial object's fibre has no structure.
        """
        M, T = f.carrier, w.monoidal
        cls._require(T, w, M.covariant)
        per = f.per_fibre
        if w.initial not in per:
            raise BaseNotCocartesian(
                item="no-initial-fibre",
                message=f"fibre over {w.initial} carries no monoidal structure",
            )
        laxator = {}
        for (x, y), s in T.tensor.obj_map.items():
            if s not in per:
                continue
            i1, i2 = w.iota(x, y)
            laxator[(x, y)] = BifunctorServices.precompose(
                per[s].tensor, M.fun(i1), M.fun(i2), name=f"μ_{x},{y}"
            )
        unit_obj = per[w.initial].unit
        draft = LaxMonoidalIndexedFactory.build_entity(
            M, T, laxator, {}, unit_obj, {}, {}, {}
        )
        helper = _Rebracket(f, w)

        laxator_cells = {}
        for (g1, g2), g12 in T.tensor.mor_map.items():
            (x, x2), (y, y2) = M.base.morphisms[g1], M.base.morphisms[g2]
            if (x, y) not in laxator or (x2, y2) not in laxator:
                continue
            cells = {}
            for (a, b) in laxator[(x, y)].obj_map:
                try:
                    cells[(a, b)] = helper.laxator_cell(g1, g2, g12, a, b)
                except UnknownObject:
                    continue
            laxator_cells[(g1, g2)] = cells

        omega = {}
        for (x, y), xy in T.tensor.obj_map.items():
            for z in M.base.objects:
                if not (T.defined(xy, z) and T.defined(y, z)):
                    continue
                if not T.defined(x, T.t(y, z)):
                    continue
                cells = {}
                for a in M.at(x).objects:
                    for b in M.at(y).objects:
                        for c in M.at(z).objects:
                            try:
                                cells[(a, b, c)] = helper.omega(x, y, z, a, b, c)
                            except UnknownObject:
                                continue
                omega[(x, y, z)] = cells

        xi, zeta = {}, {}
        for x in M.base.objects:
            for a in M.at(x).objects:
                try:
                    xi.setdefault(x, {})[a] = helper.xi(x, a)
                except UnknownObject:
                    pass
                try:
                    zeta.setdefault(x, {})[a] = helper.zeta(x, a)
                except UnknownObject:
                    pass

        braid_cell = None
        if T.braiding is not None and all(d.braiding is not None for d in per.values()):
            braid_cell = {}
            for (x, y) in T.tensor.obj_map:
                if not T.defined(y, x):
                    continue
                cells = {}
                for a in M.at(x).objects:
                    for b in M.at(y).objects:
                        try:
                            cells[(a, b)] = helper.braid(x, y, a, b)
                        except UnknownObject:
                            continue
                braid_cell[(x, y)] = cells
        return replace(
            draft,
            laxator_cells=laxator_cells,
            omega=omega,
            xi=xi,
            zeta=zeta,
            braid_cell=braid_cell,
            name=f"global {f.name}",
        )

    # ----- Round trips

    @classmethod
    def roundtrip_transfer(
        cls, subject, w: CocartesianWitness, check_input: bool = False
    ) -> LawReport:
        """
        Global -> fibrewise -> global for a LaxMonoidalIndexed, compared by a monoidal
        indexed 1-cell on the identity; fibrewise -> global -> fibrewise for a
        FibrewiseMonoidal, compared by a strong monoidal identity on each fibre.
        """
        if isinstance(subject, LaxMonoidalIndexed):
            return cls._roundtrip_global(subject, w, check_input)
        if isinstance(subject, FibrewiseMonoidal):
            return cls._roundtrip_fibrewise(subject, w, check_input)
        raise ShapeMismatch(
            item="roundtrip-subject",
            message=f"cannot transfer a {type(subject).__name__}",
        )

    @classmethod
    def _roundtrip_global(cls, l, w, check_input) -> LawReport:
        report = LawReport(subject=f"transfer roundtrip {l.name}")
        if check_input:
            report.merge(IndexedServices.check_lax_monoidal(l), "input")
            if not report.passed:
                return report.finish()
        M, T = l.carrier, l.base_monoidal
        fibrewise = cls.global_to_fibrewise(l, w)
        back = cls.fibrewise_to_global(fibrewise, w)
        lift = M.g_lift

        cells = {}
        for (x, y), nu in back.laxator.items():
            s = T.t(x, y)
            home = M.at(s)
            i1, i2 = w.iota(x, y)
            table = {}
            for (a, b) in nu.obj_map:
                try:
                    # (1, k): (x+y, μ(a, b)) -> (x+y, ν(a, b)) through ∇∘(ι+ι)
                    lam = M.g_comp(
                        lift(w.nabla(s), l.mu(s, s, M.act(i1, a), M.act(i2, b))),
                        l.g_tensor(lift(i1, a), lift(i2, b)),
                    )
                except UnknownObject:
                    continue
                forward = home.comp(lam.fibre, M.gamma(s, l.mu(x, y, a, b)))
                table[(a, b)] = home.comp(
                    home.inverse(forward), home.inverse(M.gamma(s, nu.obj(a, b)))
                )
                report.expect(
                    "comparison-iso",
                    (x, y, a, b),
                    lambda: home.is_iso(table[(a, b)]),
                    lambda: True,
                )
            cells[(x, y)] = table
        zero = M.at(w.initial)
        unit_cell = zero.comp(
            zero.inverse(M.gamma(w.initial, l.unit_obj)),
            zero.inverse(M.gamma(w.initial, back.unit_obj)),
        )
        base_functor = MonoidalFunctorFactory.build_identity(
            T, FinFunctorFactory.build_identity(M.base)
        )
        comparison = replace(
            Indexed1CellFactory.build_identity(M),
            monoidal_part=MonoidalPart(base_functor, cells, unit_cell),
            name="comparison",
        )
        report.merge(
            GrothServices.check_monoidal_groth_1cell(comparison, l, back), "comparison"
        )
        if _on_the_nose(l):
            for key, nu in back.laxator.items():
                report.expect(
                    "strict-laxator",
                    key,
                    lambda: nu.obj_map,
                    lambda: {
                        k: v
                        for k, v in l.laxator[key].obj_map.items()
                        if k in nu.obj_map
                    },
                )
        return report.finish()

    @classmethod
    def _roundtrip_fibrewise(cls, f, w, check_input) -> LawReport:
        report = LawReport(subject=f"transfer roundtrip {f.name}")
        if check_input:
            report.merge(cls.check_fibrewise(f), "input")
            if not report.passed:
                return report.finish()
        M = f.carrier
        back = cls.global_to_fibrewise(cls.fibrewise_to_global(f, w), w)
        on_the_nose = M.strict and all(
            d.strength == "strict" for d in f.reindex_monoidal.values()
        )
        for x, original in sorted(f.per_fibre.items()):
            if x not in back.per_fibre:
                report.note(f"fibre over {x}: not recovered inside the universe")
                continue
            rebuilt = back.per_fibre[x]
            home = M.at(x)
            nabla = w.nabla(x)
            i1, i2 = w.iota(x, x)
            laxator = {}
            for (a, b) in rebuilt.tensor.obj_map:
                if not original.defined(a, b):
                    continue
                dist = home.inverse(
                    f.reindex_monoidal[nabla].phi(M.act(i1, a), M.act(i2, b))
                )
                left = home.comp(home.inverse(M.gamma(x, a)), M.delta(nabla, i1, a))
                right = home.comp(home.inverse(M.gamma(x, b)), M.delta(nabla, i2, b))
                laxator[(a, b)] = home.comp(original.tm(left, right), dist)
            bang = _bang(w, x)
            if bang not in f.reindex_monoidal:
                report.note(f"fibre over {x}: no reindexing from {w.initial}")
                continue
            # I_x' = M(!_x) I_0 -> I_x
            unit_mor = home.inverse(f.reindex_monoidal[bang].unit_mor)
            identity = MonoidalFunctorFactory.build_entity(
                FinFunctorFactory.build_identity(home),
                laxator,
                unit_mor,
                strength="strong",
                name=f"1_{x}",
            )
            report.merge(
                MonoidalServices.check_monoidal_functor(identity, original, rebuilt),
                f"comparison[{x}]",
            )
            if on_the_nose:
                report.expect(
                    "strict-tensor",
                    (x,),
                    lambda: rebuilt.tensor.obj_map,
                    lambda: original.tensor.obj_map,
                )
        return report.finish()

    # ----- Strictness

    @classmethod
    def strictness_analysis(
        cls, l: LaxMonoidalIndexed, w: CocartesianWitness
    ) -> LawReport:
        """
        Reports per fibre whether the induced monoidal structure is strict: identity
        associator and unitors.
        """
        report = LawReport(subject=f"strictness {l.name}")
        M = l.carrier
        if not _on_the_nose(l):
            report.note(
                "not an ordinary lax monoidal functor: strictness is not expected"
            )
        fibrewise = cls.global_to_fibrewise(l, w)
        for x, data in sorted(fibrewise.per_fibre.items()):
            fibre = M.at(x)
            report.law("fibre-strict")
            report.tick()
            tables = [
                ("associator", data.associator),
                ("left-unitor", data.left_unitor),
                ("right-unitor", data.right_unitor),
            ]
            broken = [
                (label, key, mor)
                for label, table in tables
                for key, mor in sorted(table.items())
                if not fibre.is_identity(mor)
            ]
            if broken:
                label, key, mor = broken[0]
                report.fail(
                    "fibre-strict", (x, label), f"{label} at {key} is {mor}", every=True
                )
            else:
                report.note(f"fibre over {x}: strict monoidal")
        for x in fibrewise.skipped:
            report.note(f"fibre over {x}: outside the universe")
        return report.finish()

    # ----- The fold/augmentation criterion

    @classmethod
    def _criterion_sides(cls, l, w, x, a, kappa, lam):
        M = l.carrier
        fold = GrothMor((w.plus(x, x), l.mu(x, x, a, a)), (x, a), w.nabla(x), kappa)
        unit = GrothMor(l.g_unit(), (x, a), _bang(w, x), lam)
        left = M.g_comp(fold, l.g_tensor(unit, M.g_id(x, a)))
        right = M.g_comp(fold, l.g_tensor(M.g_id(x, a), unit))
        return (left, l.g_lambda((x, a))), (right, l.g_rho((x, a)))

    @classmethod
    def search_criterion(
        cls, l: LaxMonoidalIndexed, w: CocartesianWitness
    ) -> CocartTotalCriterion:
        """
        The least (κ_a, λ_a) per fibre object that satisfies both unit equations in the
        total. Objects with no solution are left out.
        """
        M = l.carrier
        cls._require(l.base_monoidal, w, M.covariant)
        kappa, lambda_aug = {}, {}
        for x in M.base.objects:
            fibre = M.at(x)
            try:
                nabla, bang = w.nabla(x), _bang(w, x)
            except UnknownObject:
                continue
            for a in fibre.objects:
                try:
                    folded = M.act(nabla, l.mu(x, x, a, a))
                except UnknownObject:
                    continue
                augmented = M.act(bang, l.unit_obj)
                found = cls._search_object(l, w, x, a, fibre, folded, augmented)
                if found is not None:
                    kappa.setdefault(x, {})[a] = found[0]
                    lambda_aug.setdefault(x, {})[a] = found[1]
        return CocartTotalCriterion(kappa, lambda_aug, name=f"criterion {l.name}")

    @classmethod
    def _search_object(cls, l, w, x, a, fibre, folded, augmented):
        for k in fibre.hom(folded, a):
            for u in fibre.hom(augmented, a):
                try:
                    sides = cls._criterion_sides(l, w, x, a, k, u)
                except (UnknownObject, MalformedTable):
                    return None
                if all(lhs == rhs for lhs, rhs in sides):
                    return k, u
        return None

    @classmethod
    def check_cocartesian_total(
        cls, l: LaxMonoidalIndexed, crit: CocartTotalCriterion, w: CocartesianWitness
    ) -> LawReport:
        """
        Checks the κ/λ criterion in its pseudo form in the total, together with naturality
        of κ and λ. On success the total tensor is confirmed to be a coproduct with (0, μ_0)
        initial, by enumeration.
        """
        M = l.carrier
        cls._require(l.base_monoidal, w, M.covariant)
        report = LawReport(subject=f"cocartesian total {l.name}")
        for x in M.base.objects:
            fibre = M.at(x)
            try:
                nabla, bang = w.nabla(x), _bang(w, x)
            except UnknownObject:
                report.skip("criterion")
                continue
            kappa, lam = crit.kappa.get(x, {}), crit.lambda_aug.get(x, {})
            for a in fibre.objects:
                if a not in kappa or a not in lam:
                    report.fail(
                        "criterion-missing",
                        (x, a),
                        f"no κ or λ at ({x}, {a})",
                        every=True,
                    )
                    continue
                try:
                    sides = cls._criterion_sides(l, w, x, a, kappa[a], lam[a])
                except UnknownObject:
                    report.skip("criterion")
                    continue
                (left, lhs), (right, rhs) = sides
                report.expect("criterion-left", (x, a), lambda: left, lambda: lhs)
                report.expect("criterion-right", (x, a), lambda: right, lambda: rhs)
            for h, (a, b) in fibre.morphisms.items():
                if a not in kappa or b not in kappa:
                    continue
                report.expect(
                    "kappa-naturality",
                    (x, h),
                    lambda: fibre.comp(
                        kappa[b], M.act_mor(nabla, l.mu_mor(x, x, h, h))
                    ),
                    lambda: fibre.comp(h, kappa[a]),
                )
                if a in lam and b in lam:
                    report.expect(
                        "lambda-naturality",
                        (x, h),
                        lambda: fibre.comp(h, lam[a]),
                        lambda: lam[b],
                    )
        if not report.passed:
            return report.finish()
        cls._check_total_coproducts(l, crit, w, report)
        return report.finish()

    @staticmethod
    def _check_total_coproducts(l, crit, w, report: LawReport) -> None:
        g, data = GrothServices.monoidal_total(l)
        U, E = data.total_monoidal, g.total
        unit = U.unit
        report.expect(
            "total-initial",
            (unit,),
            lambda: unit in CocartesianServices.initial_objects(E),
            lambda: True,
            f"{unit} is not initial in the total",
        )

        def from_unit(e):
            x, a = g.objects[e]
            u = GrothMor(l.g_unit(), (x, a), _bang(w, x), crit.lambda_aug[x][a])
            return g.mor_id(u)

        for (e1, e2), s in sorted(U.tensor.obj_map.items()):
            try:
                i = E.comp(U.tm(E.id(e1), from_unit(e2)), E.inverse(U.rho(e1)))
                j = E.comp(U.tm(from_unit(e1), E.id(e2)), E.inverse(U.lam(e2)))
            except (UnknownObject, KeyError):
                report.skip("total-coproduct")
                continue
            report.expect(
                "total-coproduct",
                (e1, e2),
                lambda: CocartesianServices.is_coproduct(E, e1, e2, s, i, j),
                lambda: True,
                f"{s} is not a coproduct of {e1} and {e2}",
            )


class _Rebracket:
    """
    Canonical isomorphisms between global structure objects and bracketed tensors of
    reindexed atoms M(ι) a in one fibre.
    """

    def __init__(self, f: FibrewiseMonoidal, w: CocartesianWitness):
        self.f, self.w = f, w
        self.M, self.T = f.carrier, w.monoidal
        self.B = f.carrier.base

    def home(self, x: str) -> FinCat:
        return self.M.at(x)

    def fibre(self, x: str) -> MonoidalData:
        try:
            return self.f.per_fibre[x]
        except KeyError:
            raise UnknownObject(
                item="undefined-fibre-structure",
                message=f"fibre over {x} carries no monoidal structure",
            )

    def dist(self, u: str, a: str, b: str) -> str:
        """φ_u^-1: M u (a ⊗ b) -> M u a ⊗ M u b."""
        y = self.B.cod(u)
        try:
            phi = self.f.reindex_monoidal[u].phi(a, b)
        except KeyError:
            raise UnknownObject(
                item="undefined-fibre-structure",
                message=f"M{u} carries no monoidal structure",
            )
        return self.home(y).inverse(phi)

    def atom(self, u: str, v: str, a: str) -> str:
        """δ_{u,v}: M u M v a -> M(u∘v) a."""
        return self.M.delta(u, v, a)

    def laxator_cell(self, g1, g2, g12, a, b):
        M, w = self.M, self.w
        (x, x2), (y, y2) = self.B.morphisms[g1], self.B.morphisms[g2]
        t = self.T.t(x2, y2)
        home, F = self.home(t), self.fibre(t)
        i1, i2 = w.iota(x, y)
        k1, k2 = w.iota(x2, y2)
        step = self.dist(g12, M.act(i1, a), M.act(i2, b))
        left = home.comp(home.inverse(self.atom(k1, g1, a)), self.atom(g12, i1, a))
        right = home.comp(home.inverse(self.atom(k2, g2, b)), self.atom(g12, i2, b))
        return home.comp(F.tm(left, right), step)

    def omega(self, x, y, z, a, b, c):
        M, w, B, T = self.M, self.w, self.B, self.T
        xy, yz = T.t(x, y), T.t(y, z)
        t = T.t(x, yz)
        home, F = self.home(t), self.fibre(t)
        alpha = T.alpha(x, y, z)
        i1, i2 = w.iota(x, y)
        j1, j2 = w.iota(xy, z)
        k1, k2 = w.iota(x, yz)
        m1, m2 = w.iota(y, z)

        inner = self.fibre(xy).t(M.act(i1, a), M.act(i2, b))
        aj1 = B.comp(alpha, j1)
        first = home.comp(
            F.tm(self.atom(aj1, i1, a), self.atom(aj1, i2, b)),
            self.dist(aj1, M.act(i1, a), M.act(i2, b)),
            self.atom(alpha, j1, inner),
        )
        source_iso = home.comp(
            F.tm(first, self.atom(alpha, j2, c)),
            self.dist(alpha, M.act(j1, inner), M.act(j2, c)),
        )
        nested = home.comp(
            F.tm(self.atom(k2, m1, b), self.atom(k2, m2, c)),
            self.dist(k2, M.act(m1, b), M.act(m2, c)),
        )
        target_iso = F.tm(home.id(M.act(k1, a)), nested)
        A = M.act(B.comp(aj1, i1), a)
        Bo = M.act(B.comp(aj1, i2), b)
        C = M.act(B.comp(alpha, j2), c)
        return home.comp(home.inverse(target_iso), F.alpha(A, Bo, C), source_iso)

    def _unit_side(self, x, structure, unit_first, a):
        M, w, B = self.M, self.w, self.B
        home, F = self.home(x), self.fibre(x)
        zero = self.fibre(w.initial).unit
        i1, i2 = w.iota(*((w.initial, x) if unit_first else (x, w.initial)))
        lhs, rhs = (zero, a) if unit_first else (a, zero)
        step = self.dist(structure, M.act(i1, lhs), M.act(i2, rhs))
        bang = B.comp(structure, i1 if unit_first else i2)
        try:
            unit_mor = self.f.reindex_monoidal[bang].unit_mor
        except KeyError:
            raise UnknownObject(
                item="undefined-fibre-structure",
                message=f"M{bang} carries no monoidal structure",
            )
        collapse_unit = home.comp(
            home.inverse(unit_mor), self.atom(structure, i1 if unit_first else i2, zero)
        )
        collapse_atom = home.comp(
            home.inverse(M.gamma(x, a)),
            self.atom(structure, i2 if unit_first else i1, a),
        )
        if unit_first:
            return home.comp(F.lam(a), F.tm(collapse_unit, collapse_atom), step)
        return home.comp(F.rho(a), F.tm(collapse_atom, collapse_unit), step)

    def xi(self, x, a):
        part = self._unit_side(x, self.T.lam(x), True, a)
        return self.home(x).inverse(part)

    def zeta(self, x, a):
        return self._unit_side(x, self.T.rho(x), False, a)

    def braid(self, x, y, a, b):
        M, w, T = self.M, self.w, self.T
        t = T.t(y, x)
        home, F = self.home(t), self.fibre(t)
        beta = T.beta(x, y)
        i1, i2 = w.iota(x, y)
        step = self.dist(beta, M.act(i1, a), M.act(i2, b))
        atoms = F.tm(self.atom(beta, i1, a), self.atom(beta, i2, b))
        A = M.act(self.B.comp(beta, i1), a)
        Bo = M.act(self.B.comp(beta, i2), b)
        return home.comp(F.beta(A, Bo), atoms, step)
