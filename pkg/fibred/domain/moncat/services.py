import logging
from typing import Dict, List, Optional, Tuple, Type

from django.conf import settings

from fibred.domain.fincat.models import BifunctorFactory, FinCat, LawReport, NatTrans
from fibred.domain.fincat.services import (
    BifunctorServices,
    FinFunctorServices,
    NatTransServices,
)
from utils.django.exceptions import (
    BaseNotCocartesian,
    MalformedTable,
    ShapeMismatch,
    SizeLimitExceeded,
)

from .models import (
    CocartesianWitness,
    MonoidalData,
    MonoidalFactory,
    MonoidalFunctorData,
    MonoidalFunctorFactory,
)

log = logging.getLogger(__name__)


def _triples(m: MonoidalData) -> List[Tuple[str, str, str]]:
    """Triples on which both bracketings of the tensor are defined."""
    out = []
    for (x, y), xy in m.tensor.obj_map.items():
        for z in m.base.objects:
            if m.defined(xy, z) and m.defined(y, z) and m.defined(x, m.t(y, z)):
                out.append((x, y, z))
    return out


class MonoidalServices:
    """
    Coherence checkers for monoidal categories, monoidal functors and monoidal transformations.

    Methods:
    - get_monoidal_factory() -> Type[MonoidalFactory]
    - tensor_of(m, x, y) -> str; tensor_mor(m, f, g) -> str
    - check_monoidal(m) -> LawReport
    - check_monoidal_functor(F, src, tgt) -> LawReport
    - check_monoidal_nat_trans(t, F, G, src, tgt) -> LawReport
    """

    @staticmethod
    def get_monoidal_factory() -> Type[MonoidalFactory]:
        return MonoidalFactory

    @staticmethod
    def get_monoidal_functor_factory() -> Type[MonoidalFunctorFactory]:
        return MonoidalFunctorFactory

    @staticmethod
    def tensor_of(m: MonoidalData, x: str, y: str) -> str:
        return m.t(x, y)

    @staticmethod
    def tensor_mor(m: MonoidalData, f: str, g: str) -> str:
        return m.tm(f, g)

    @staticmethod
    def check_monoidal(m: MonoidalData) -> LawReport:
        """
        Checks a monoidal structure exhaustively.

        Laws: tensor functoriality, typing and invertibility of α, l, r (and b), their
        naturality in each variable, pentagon, triangle, both hexagons and, when claimed,
        symmetry. Instances that leave a partial tensor are skipped and counted.

        Raises:
        - MalformedTable: If the unit is not an object or a structure table lacks an entry
            where both sides are defined.
        """
        report = LawReport(subject=f"monoidal {m.name}")
        report.merge(BifunctorServices.check_bifunctor(m.tensor), "tensor")
        if not report.passed:
            return report.finish()
        B, t, tm, I = m.base, m.t, m.tm, m.unit
        if not B.has_object(I):
            raise MalformedTable(item="unknown-unit", message=f"{I} is not an object")
        triples = _triples(m)
        triple_set = set(triples)

        def structure(law, witness, mor, dom, cod):
            report.law(law)
            report.tick()
            if B.morphisms.get(mor) != (dom, cod):
                report.fail(law, witness, f"{mor} should run {dom} -> {cod}")
            elif not B.is_iso(mor):
                report.fail(law, witness, f"{mor} is not invertible")

        for x, y, z in triples:
            structure(
                "associator-iso",
                (x, y, z),
                m.alpha(x, y, z),
                t(t(x, y), z),
                t(x, t(y, z)),
            )
        for x in B.objects:
            if m.defined(I, x):
                structure("left-unitor-iso", (x,), m.lam(x), t(I, x), x)
            if m.defined(x, I):
                structure("right-unitor-iso", (x,), m.rho(x), t(x, I), x)
        if report.violations:
            return report.finish()

        one = B.id
        for x, y, z in triples:
            for f in B.out_of(x):
                x2 = B.cod(f)
                if (x2, y, z) in triple_set:
                    report.expect(
                        "associator-naturality",
                        (f, y, z),
                        lambda: B.comp(m.alpha(x2, y, z), tm(tm(f, one(y)), one(z))),
                        lambda: B.comp(tm(f, tm(one(y), one(z))), m.alpha(x, y, z)),
                    )
            for g in B.out_of(y):
                y2 = B.cod(g)
                if (x, y2, z) in triple_set:
                    report.expect(
                        "associator-naturality",
                        (x, g, z),
                        lambda: B.comp(m.alpha(x, y2, z), tm(tm(one(x), g), one(z))),
                        lambda: B.comp(tm(one(x), tm(g, one(z))), m.alpha(x, y, z)),
                    )
            for h in B.out_of(z):
                z2 = B.cod(h)
                if (x, y, z2) in triple_set:
                    report.expect(
                        "associator-naturality",
                        (x, y, h),
                        lambda: B.comp(m.alpha(x, y, z2), tm(tm(one(x), one(y)), h)),
                        lambda: B.comp(tm(one(x), tm(one(y), h)), m.alpha(x, y, z)),
                    )

        for f in B.mor_ids:
            x, x2 = B.morphisms[f]
            if m.defined(I, x) and m.defined(I, x2):
                report.expect(
                    "left-unitor-naturality",
                    (f,),
                    lambda: B.comp(f, m.lam(x)),
                    lambda: B.comp(m.lam(x2), tm(one(I), f)),
                )
            if m.defined(x, I) and m.defined(x2, I):
                report.expect(
                    "right-unitor-naturality",
                    (f,),
                    lambda: B.comp(f, m.rho(x)),
                    lambda: B.comp(m.rho(x2), tm(f, one(I))),
                )

        for x, y, z in triples:
            for w in B.objects:
                report.expect(
                    "pentagon",
                    (w, x, y, z),
                    lambda: B.comp(m.alpha(w, x, t(y, z)), m.alpha(t(w, x), y, z)),
                    lambda: B.comp(
                        tm(one(w), m.alpha(x, y, z)),
                        m.alpha(w, t(x, y), z),
                        tm(m.alpha(w, x, y), one(z)),
                    ),
                )
        for x in B.objects:
            for y in B.objects:
                report.expect(
                    "triangle",
                    (x, y),
                    lambda: B.comp(tm(one(x), m.lam(y)), m.alpha(x, I, y)),
                    lambda: tm(m.rho(x), one(y)),
                )

        if m.braiding is not None:
            MonoidalServices._check_braiding(m, report, triples)
        return report.finish()

    @staticmethod
    def _check_braiding(m: MonoidalData, report: LawReport, triples) -> None:
        B, t, tm = m.base, m.t, m.tm
        one = B.id
        inv = B.inverse
        for (x, y) in m.tensor.obj_map:
            if not m.defined(y, x):
                continue
            b = m.beta(x, y)
            report.law("braiding-iso")
            report.tick()
            if B.morphisms.get(b) != (t(x, y), t(y, x)) or not B.is_iso(b):
                report.fail("braiding-iso", (x, y), f"{b} is not an iso x⊗y -> y⊗x")
                return
        for (x, y) in m.tensor.obj_map:
            for f in B.out_of(x):
                x2 = B.cod(f)
                report.expect(
                    "braiding-naturality",
                    (f, y),
                    lambda: B.comp(m.beta(x2, y), tm(f, one(y))),
                    lambda: B.comp(tm(one(y), f), m.beta(x, y)),
                )
            for g in B.out_of(y):
                y2 = B.cod(g)
                report.expect(
                    "braiding-naturality",
                    (x, g),
                    lambda: B.comp(m.beta(x, y2), tm(one(x), g)),
                    lambda: B.comp(tm(g, one(x)), m.beta(x, y)),
                )
            if m.symmetric:
                report.expect(
                    "symmetry",
                    (x, y),
                    lambda: B.comp(m.beta(y, x), m.beta(x, y)),
                    lambda: one(t(x, y)),
                )
        for x, y, z in triples:
            report.expect(
                "hexagon",
                (x, y, z),
                lambda: B.comp(m.alpha(y, z, x), m.beta(x, t(y, z)), m.alpha(x, y, z)),
                lambda: B.comp(
                    tm(one(y), m.beta(x, z)),
                    m.alpha(y, x, z),
                    tm(m.beta(x, y), one(z)),
                ),
            )
            report.expect(
                "inverse-hexagon",
                (x, y, z),
                lambda: B.comp(
                    inv(m.alpha(z, x, y)), m.beta(t(x, y), z), inv(m.alpha(x, y, z))
                ),
                lambda: B.comp(
                    tm(m.beta(x, z), one(y)),
                    inv(m.alpha(x, z, y)),
                    tm(one(x), m.beta(y, z)),
                ),
            )

    @staticmethod
    def check_monoidal_functor(
        F: MonoidalFunctorData, src: MonoidalData, tgt: MonoidalData
    ) -> LawReport:
        """
        Checks the lax monoidal functor axioms, the braided axiom when both ends are braided,
        and the claimed strength.

        Raises:
        - ShapeMismatch: If the underlying functor does not run src.base -> tgt.base.
        """
        U = F.underlying
        if not (U.source == src.base and U.target == tgt.base):
            raise ShapeMismatch(
                item="monoidal-functor-shape",
                message=f"{F.name} does not run {src.name} -> {tgt.name}",
            )
        report = LawReport(subject=f"monoidal functor {F.name}")
        report.merge(FinFunctorServices.check_functor(U), "underlying")
        if not report.passed:
            return report.finish()
        S, T = src.base, tgt.base
        one = T.id

        report.law("laxator-typing")
        for (a, b) in src.tensor.obj_map:
            if not tgt.defined(U.obj(a), U.obj(b)):
                report.skip("laxator-typing")
                continue
            report.tick()
            expected = (tgt.t(U.obj(a), U.obj(b)), U.obj(src.t(a, b)))
            phi = F.laxator.get((a, b))
            if T.morphisms.get(phi) != expected:
                report.fail(
                    "laxator-typing", (a, b), f"φ({a},{b}) should run {expected}"
                )
        report.tick()
        if T.morphisms.get(F.unit_mor) != (tgt.unit, U.obj(src.unit)):
            report.fail("laxator-typing", ("unit",), "φ0 should run I -> F(I)")
        if report.violations:
            return report.finish()

        for (a, b) in src.tensor.obj_map:
            for f in S.out_of(a):
                a2 = S.cod(f)
                if src.defined(a2, b):
                    report.expect(
                        "laxator-naturality",
                        (f, b),
                        lambda: T.comp(U.mor(src.tm(f, S.id(b))), F.phi(a, b)),
                        lambda: T.comp(
                            F.phi(a2, b), tgt.tm(U.mor(f), one(U.obj(b)))
                        ),
                    )
            for g in S.out_of(b):
                b2 = S.cod(g)
                if src.defined(a, b2):
                    report.expect(
                        "laxator-naturality",
                        (a, g),
                        lambda: T.comp(U.mor(src.tm(S.id(a), g)), F.phi(a, b)),
                        lambda: T.comp(
                            F.phi(a, b2), tgt.tm(one(U.obj(a)), U.mor(g))
                        ),
                    )

        for a, b, c in _triples(src):
            Fa, Fb, Fc = U.obj(a), U.obj(b), U.obj(c)
            report.expect(
                "associativity",
                (a, b, c),
                lambda: T.comp(
                    U.mor(src.alpha(a, b, c)),
                    F.phi(src.t(a, b), c),
                    tgt.tm(F.phi(a, b), one(Fc)),
                ),
                lambda: T.comp(
                    F.phi(a, src.t(b, c)),
                    tgt.tm(one(Fa), F.phi(b, c)),
                    tgt.alpha(Fa, Fb, Fc),
                ),
            )
        for a in S.objects:
            Fa = U.obj(a)
            report.expect(
                "left-unitality",
                (a,),
                lambda: T.comp(
                    U.mor(src.lam(a)),
                    F.phi(src.unit, a),
                    tgt.tm(F.unit_mor, one(Fa)),
                ),
                lambda: tgt.lam(Fa),
            )
            report.expect(
                "right-unitality",
                (a,),
                lambda: T.comp(
                    U.mor(src.rho(a)),
                    F.phi(a, src.unit),
                    tgt.tm(one(Fa), F.unit_mor),
                ),
                lambda: tgt.rho(Fa),
            )

        if src.braiding is not None and tgt.braiding is not None:
            for (a, b) in src.tensor.obj_map:
                report.expect(
                    "braided",
                    (a, b),
                    lambda: T.comp(U.mor(src.beta(a, b)), F.phi(a, b)),
                    lambda: T.comp(F.phi(b, a), tgt.beta(U.obj(a), U.obj(b))),
                )

        if F.strength in ("strong", "strict"):
            report.law(F.strength)
            cells = [((a, b), phi) for (a, b), phi in F.laxator.items()]
            cells.append((("unit",), F.unit_mor))
            for witness, phi in cells:
                report.tick()
                if F.strength == "strong" and not T.is_iso(phi):
                    report.fail("strong", witness, f"{phi} is not invertible")
                if F.strength == "strict" and not T.is_identity(phi):
                    report.fail("strict", witness, f"{phi} is not an identity")
        return report.finish()

    @staticmethod
    def check_monoidal_nat_trans(
        t: NatTrans,
        F: MonoidalFunctorData,
        G: MonoidalFunctorData,
        src: MonoidalData,
        tgt: MonoidalData,
    ) -> LawReport:
        """
        Checks that t: F => G is natural and monoidal: t_{a⊗b}∘φF = φG∘(t_a⊗t_b) and t_I∘φF0 = φG0.

        Raises:
        - ShapeMismatch: If t does not run between the underlying functors.
        """
        if t.source_fun != F.underlying or t.target_fun != G.underlying:
            raise ShapeMismatch(
                item="monoidal-transformation-shape",
                message=f"{t.name} does not run {F.name} => {G.name}",
            )
        report = LawReport(subject=f"monoidal transformation {t.name}")
        report.merge(NatTransServices.check_nat_trans(t), "underlying")
        if not report.passed:
            return report.finish()
        T = tgt.base
        for (a, b) in src.tensor.obj_map:
            report.expect(
                "monoidal-naturality",
                (a, b),
                lambda: T.comp(t.at(src.t(a, b)), F.phi(a, b)),
                lambda: T.comp(G.phi(a, b), tgt.tm(t.at(a), t.at(b))),
            )
        report.expect(
            "monoidal-unit",
            ("unit",),
            lambda: T.comp(t.at(src.unit), F.unit_mor),
            lambda: G.unit_mor,
        )
        return report.finish()


class CocartesianWitnessFactory:
    """
    Builds a CocartesianWitness from chosen coproducts and an initial object.

    Tensor on morphisms, associator, unitors, the swap braiding and codiagonals are all
    obtained by mediating-morphism search.
    """

    @staticmethod
    def build_entity(
        c: FinCat,
        coproducts: Dict[Tuple[str, str], Tuple[str, str, str]],
        initial: str,
        name: str = "",
    ) -> CocartesianWitness:
        name = name or f"{c.name}+"
        mediators: Dict[Tuple[str, str, str], Dict[Tuple[str, str], str]] = {}

        def mediate(x: str, y: str, f: str, g: str) -> str:
            s, i, j = coproducts[(x, y)]
            w = c.cod(f)
            key = (x, y, w)
            if key not in mediators:
                mediators[key] = {
                    (c.comp(h, i), c.comp(h, j)): h for h in c.hom(s, w)
                }
            try:
                return mediators[key][(f, g)]
            except KeyError:
                raise MalformedTable(
                    item="not-a-coproduct",
                    message=f"{name}: ({f}, {g}) has no mediator out of {s}",
                )

        def on_morphisms(f: str, g: str) -> str:
            _, i2, j2 = coproducts[(c.cod(f), c.cod(g))]
            return mediate(c.dom(f), c.dom(g), c.comp(i2, f), c.comp(j2, g))

        tensor = BifunctorFactory.build_from_functions(
            c,
            c,
            c,
            lambda x, y: coproducts[(x, y)][0] if (x, y) in coproducts else None,
            on_morphisms,
            name="+",
        )

        def plus(x, y):
            return coproducts[(x, y)][0]

        associator = {}
        for (x, y), (xy, _, _) in coproducts.items():
            for z in c.objects:
                if (xy, z) not in coproducts or (y, z) not in coproducts:
                    continue
                yz, iy, jz = coproducts[(y, z)]
                if (x, yz) not in coproducts:
                    continue
                _, ix, jyz = coproducts[(x, yz)]
                left = mediate(x, y, ix, c.comp(jyz, iy))
                associator[(x, y, z)] = mediate(xy, z, left, c.comp(jyz, jz))

        bang = {x: c.hom(initial, x)[0] for x in c.objects}
        left_unitor = {
            x: mediate(initial, x, bang[x], c.id(x))
            for x in c.objects
            if (initial, x) in coproducts
        }
        right_unitor = {
            x: mediate(x, initial, c.id(x), bang[x])
            for x in c.objects
            if (x, initial) in coproducts
        }
        braiding = {}
        for (x, y) in coproducts:
            if (y, x) in coproducts:
                _, iy, jx = coproducts[(y, x)]
                braiding[(x, y)] = mediate(x, y, jx, iy)
        codiagonal = {
            x: mediate(x, x, c.id(x), c.id(x))
            for x in c.objects
            if (x, x) in coproducts
        }
        monoidal = MonoidalFactory.build_entity(
            c,
            tensor,
            initial,
            associator,
            left_unitor,
            right_unitor,
            braiding=braiding,
            symmetric=True,
            name=name,
        )
        log.debug("built cocartesian witness %s: %d coproducts", name, len(coproducts))
        return CocartesianWitness(
            monoidal=monoidal,
            coprojections={key: (i, j) for key, (_, i, j) in coproducts.items()},
            codiagonal=codiagonal,
            initial=initial,
            bang=bang,
            name=name,
        )


class CocartesianServices:
    """
    Search for and verification of cocartesian structure.

    Methods:
    - find_cocartesian(c, require_total=False) -> Optional[CocartesianWitness]
    - witness_for(m) -> CocartesianWitness: Coprojections read off a cocartesian m.
    - search_coproduct(c, x, y) -> Optional[Tuple[str, str, str]]
    - check_witness(w) -> LawReport
    """

    @staticmethod
    def get_witness_factory() -> Type[CocartesianWitnessFactory]:
        return CocartesianWitnessFactory

    @staticmethod
    def initial_objects(c: FinCat) -> List[str]:
        return [
            x for x in sorted(c.objects) if all(
                len(c.hom(x, y)) == 1 for y in c.objects
            )
        ]

    @staticmethod
    def is_coproduct(c: FinCat, x: str, y: str, s: str, i: str, j: str) -> bool:
        """True iff h ↦ (h∘i, h∘j) is a bijection hom(s, w) -> hom(x, w) × hom(y, w) for all w."""
        for w in c.objects:
            if len(c.hom(s, w)) != len(c.hom(x, w)) * len(c.hom(y, w)):
                return False
            images = {(c.comp(h, i), c.comp(h, j)) for h in c.hom(s, w)}
            if len(images) != len(c.hom(s, w)):
                return False
        return True

    @classmethod
    def search_coproduct(
        cls, c: FinCat, x: str, y: str
    ) -> Optional[Tuple[str, str, str]]:
        """The lexicographically least coproduct object with its least coprojections, if any."""
        for s in sorted(c.objects):
            if any(
                len(c.hom(s, w)) != len(c.hom(x, w)) * len(c.hom(y, w))
                for w in c.objects
            ):
                continue
            for i in c.hom(x, s):
                for j in c.hom(y, s):
                    if cls.is_coproduct(c, x, y, s, i, j):
                        return s, i, j
        return None

    @classmethod
    def find_cocartesian(
        cls,
        c: FinCat,
        require_total: bool = False,
        max_objects: Optional[int] = None,
    ) -> Optional[CocartesianWitness]:
        """
        Searches c for an initial object and binary coproducts.

        Parameters:
        - require_total (bool): Return None when some pair has no coproduct. Otherwise the
            witness is partial and records only the coproducts found.

        Returns:
        - Optional[CocartesianWitness]: None without an initial object.

        Raises:
        - SizeLimitExceeded: Above the configured search bound.
        """
        limit = max_objects if max_objects is not None else settings.SEARCH_MAX_OBJECTS
        if len(c.objects) > limit:
            raise SizeLimitExceeded(
                item="cocartesian-search",
                message=f"{c.name} has more than {limit} objects",
            )
        initials = cls.initial_objects(c)
        if not initials:
            return None
        coproducts = {}
        for x in c.objects:
            for y in c.objects:
                found = cls.search_coproduct(c, x, y)
                if found is None:
                    if require_total:
                        return None
                    continue
                coproducts[(x, y)] = found
        return CocartesianWitnessFactory.build_entity(c, coproducts, initials[0])

    @staticmethod
    def witness_for(m: MonoidalData) -> CocartesianWitness:
        """
        Reads the coprojections of a cocartesian monoidal structure off its own tables:
        ι_x = (1_x ⊗ !_y)∘ρ_x^-1 and ι_y = (!_x ⊗ 1_y)∘λ_y^-1.

        Pairs whose unit tensors are outside the universe are left out.

        Raises:
        - BaseNotCocartesian: If the unit is not initial or a unitor is not invertible.
        """
        c, unit = m.base, m.unit
        if any(len(c.hom(unit, x)) != 1 for x in c.objects):
            raise BaseNotCocartesian(
                item="unit-not-initial", message=f"{m.name}: {unit} is not initial"
            )
        bang = {x: c.hom(unit, x)[0] for x in c.objects}
        coproducts = {}
        for (x, y), s in m.tensor.obj_map.items():
            if not (m.defined(x, unit) and m.defined(unit, y)):
                continue
            rho, lam = m.rho(x), m.lam(y)
            if not (c.is_iso(rho) and c.is_iso(lam)):
                raise BaseNotCocartesian(
                    item="unitor-not-invertible",
                    message=f"{m.name}: the unitors at {x}, {y} are not invertible",
                )
            i = c.comp(m.tm(c.id(x), bang[y]), c.inverse(rho))
            j = c.comp(m.tm(bang[x], c.id(y)), c.inverse(lam))
            coproducts[(x, y)] = (s, i, j)
        return CocartesianWitnessFactory.build_entity(c, coproducts, unit)

    @classmethod
    def check_witness(cls, w: CocartesianWitness) -> LawReport:
        """Verifies the universal properties a witness claims, by enumeration."""
        report = LawReport(subject=f"cocartesian witness {w.name}")
        c = w.base
        report.law("initial")
        report.tick()
        if w.initial not in cls.initial_objects(c):
            report.fail("initial", (w.initial,), f"{w.initial} is not initial")
        report.law("coproduct")
        for (x, y), (i, j) in w.coprojections.items():
            report.tick()
            if not cls.is_coproduct(c, x, y, w.plus(x, y), i, j):
                report.fail("coproduct", (x, y), f"{w.plus(x, y)} is not {x}+{y}")
        for x, nabla in w.codiagonal.items():
            report.expect(
                "codiagonal",
                (x,),
                lambda: w.mediate(x, x, c.id(x), c.id(x)),
                lambda: nabla,
            )
        return report.finish()
