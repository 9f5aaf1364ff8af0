import logging
from typing import Dict, Iterable, List, Optional, Tuple, Type

from django.conf import settings

from utils.data_manipulation.type_conversion import pair
from utils.django.exceptions import MalformedTable, ShapeMismatch, SizeLimitExceeded

from .models import (
    Bifunctor,
    BifunctorFactory,
    FinCat,
    FinCatFactory,
    FinFunctor,
    FinFunctorFactory,
    LawReport,
    NatTrans,
    NatTransFactory,
)

log = logging.getLogger(__name__)


def _same(c: FinCat, d: FinCat) -> bool:
    return c is d or c == d


class FinCatServices:
    """
    Constructions and law checkers for finite categories.

    Methods:
    - get_fincat_factory() -> Type[FinCatFactory]
    - check_category(c: FinCat) -> LawReport: Typing, unit and associativity laws, exhaustively.
    - opposite(c: FinCat) -> FinCat
    - product(c: FinCat, d: FinCat) -> FinCat
    - full_subcategory(c: FinCat, objects) -> FinCat
    """

    @staticmethod
    def get_fincat_factory() -> Type[FinCatFactory]:
        return FinCatFactory

    @staticmethod
    def check_category(c: FinCat) -> LawReport:
        """
        Checks a category table exhaustively.

        Returns:
        - LawReport: Pass, or the first violated instance per law ("typing", "identity-typing",
            "composite-typing", "unit", "associativity").

        Raises:
        - MalformedTable: If an object lacks an identity or a composable pair lacks a composite.
        """
        report = LawReport(subject=f"category {c.name}")
        objects = set(c.objects)

        report.law("typing")
        for f, (x, y) in c.morphisms.items():
            report.tick()
            if x not in objects or y not in objects:
                report.fail("typing", (f,), f"{f}: {x} -> {y} leaves the object set")

        report.law("identity-typing")
        for x in c.objects:
            if x not in c.identity:
                raise MalformedTable(
                    item="missing-identity", message=f"{c.name}: no identity on {x}"
                )
            report.tick()
            if c.morphisms.get(c.identity[x]) != (x, x):
                report.fail(
                    "identity-typing",
                    (x,),
                    f"identity {c.identity[x]} of {x} is not an endomorphism of {x}",
                )

        report.law("composite-typing")
        for g, f in c.composable_pairs():
            if (g, f) not in c.compose:
                raise MalformedTable(
                    item="missing-composite",
                    message=f"{c.name}: composable pair ({g}, {f}) has no composite",
                )
            report.tick()
            h = c.compose[(g, f)]
            expected = (c.dom(f), c.cod(g))
            if c.morphisms.get(h) != expected:
                report.fail(
                    "composite-typing",
                    (g, f),
                    f"{g}∘{f} = {h} should run {expected[0]} -> {expected[1]}",
                )
        for g, f in c.compose:
            if c.morphisms.get(f, (None, None))[1] != c.morphisms.get(g, (None,))[0]:
                report.fail(
                    "composite-typing", (g, f), f"entry for non-composable ({g}, {f})"
                )

        report.law("unit")
        for f in c.mor_ids:
            x, y = c.morphisms[f]
            report.tick()
            if (
                c.compose.get((f, c.identity.get(x))) != f
                or c.compose.get((c.identity.get(y), f)) != f
            ):
                report.fail("unit", (f,), f"identities do not act trivially on {f}")

        report.law("associativity")
        for h, g, f in c.composable_triples():
            report.tick()
            left = c.compose.get((h, c.compose[(g, f)]))
            right = c.compose.get((c.compose[(h, g)], f))
            if left is None or left != right:
                report.fail(
                    "associativity",
                    (h, g, f),
                    f"{h}∘({g}∘{f}) = {left} but ({h}∘{g})∘{f} = {right}",
                )

        log.info("checked %s: %d instances", report.subject, report.instances)
        return report

    @staticmethod
    def opposite(c: FinCat) -> FinCat:
        name = c.name[:-3] if c.name.endswith("^op") else f"{c.name}^op"
        return FinCatFactory.build_entity(
            objects=c.objects,
            morphisms={f: (y, x) for f, (x, y) in c.morphisms.items()},
            identity=c.identity,
            compose={(f, g): h for (g, f), h in c.compose.items()},
            name=name,
        )

    @staticmethod
    def product(c: FinCat, d: FinCat) -> FinCat:
        """Objects and morphisms are pair identifiers "(x|y)"; composition is componentwise."""
        morphisms = {
            pair(f, g): (pair(xf, xg), pair(yf, yg))
            for f, (xf, yf) in c.morphisms.items()
            for g, (xg, yg) in d.morphisms.items()
        }
        compose = {
            (pair(g1, g2), pair(f1, f2)): pair(h1, h2)
            for (g1, f1), h1 in c.compose.items()
            for (g2, f2), h2 in d.compose.items()
        }
        return FinCatFactory.build_entity(
            objects=[pair(x, y) for x in c.objects for y in d.objects],
            morphisms=morphisms,
            identity={
                pair(x, y): pair(c.identity[x], d.identity[y])
                for x in c.objects
                for y in d.objects
            },
            compose=compose,
            name=f"{c.name}×{d.name}",
        )

    @staticmethod
    def full_subcategory(c: FinCat, objects: Iterable[str], name: str = "") -> FinCat:
        keep = [x for x in c.objects if x in set(objects)]
        kept = set(keep)
        morphisms = {
            f: (x, y) for f, (x, y) in c.morphisms.items() if x in kept and y in kept
        }
        return FinCatFactory.build_entity(
            objects=keep,
            morphisms=morphisms,
            identity={x: c.identity[x] for x in keep},
            compose={
                (g, f): h
                for (g, f), h in c.compose.items()
                if f in morphisms and g in morphisms
            },
            name=name or f"{c.name}|{len(keep)}",
        )


class FinFunctorServices:
    """
    Functor calculus: checking, composition, products, inverses and isomorphism search.

    Methods:
    - check_functor(F) -> LawReport
    - compose_functors(G, F) -> FinFunctor: G∘F.
    - product_functor(F, G) -> FinFunctor: F×G.
    - swap_functor(c, d) -> FinFunctor: c×d -> d×c.
    - inverse_functor(F) -> Optional[FinFunctor]
    - find_isomorphism(c, d) -> Optional[Tuple[FinFunctor, FinFunctor]]
    """

    @staticmethod
    def get_functor_factory() -> Type[FinFunctorFactory]:
        return FinFunctorFactory

    @staticmethod
    def check_functor(F: FinFunctor) -> LawReport:
        report = LawReport(subject=f"functor {F.name}")
        src, tgt = F.source, F.target
        missing = [x for x in src.objects if x not in F.obj_map] + [
            f for f in src.morphisms if f not in F.mor_map
        ]
        if missing:
            raise MalformedTable(
                item="functor-table-incomplete",
                message=f"{F.name}: no image for {missing[0]}",
            )

        report.law("typing")
        for x in src.objects:
            report.tick()
            if not tgt.has_object(F.obj_map[x]):
                report.fail("typing", (x,), f"{x} maps outside {tgt.name}")
        for f, (x, y) in src.morphisms.items():
            report.tick()
            expected = (F.obj_map[x], F.obj_map[y])
            if tgt.morphisms.get(F.mor_map[f]) != expected:
                report.fail(
                    "typing", (f,), f"F({f}) = {F.mor_map[f]} should run {expected}"
                )

        report.law("identity")
        for x in src.objects:
            report.tick()
            if F.mor_map[src.identity[x]] != tgt.identity.get(F.obj_map[x]):
                report.fail("identity", (x,), f"identity on {x} is not preserved")

        report.law("composition")
        for (g, f), h in src.compose.items():
            report.tick()
            if F.mor_map[h] != tgt.compose.get((F.mor_map[g], F.mor_map[f])):
                report.fail(
                    "composition", (g, f), f"F({g}∘{f}) differs from F({g})∘F({f})"
                )
        log.info("checked %s: %d instances", report.subject, report.instances)
        return report

    @staticmethod
    def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
        if not _same(F.target, G.source):
            raise ShapeMismatch(
                item="functor-composition",
                message=f"{G.name}∘{F.name}: {F.target.name} is not {G.source.name}",
            )
        return FinFunctorFactory.build_entity(
            F.source,
            G.target,
            {x: G.obj_map[y] for x, y in F.obj_map.items()},
            {f: G.mor_map[g] for f, g in F.mor_map.items()},
            name=f"{G.name}∘{F.name}",
        )

    @staticmethod
    def product_functor(F: FinFunctor, G: FinFunctor) -> FinFunctor:
        source = FinCatServices.product(F.source, G.source)
        target = FinCatServices.product(F.target, G.target)
        return FinFunctorFactory.build_entity(
            source,
            target,
            {
                pair(x, y): pair(F.obj_map[x], G.obj_map[y])
                for x in F.source.objects
                for y in G.source.objects
            },
            {
                pair(f, g): pair(F.mor_map[f], G.mor_map[g])
                for f in F.source.morphisms
                for g in G.source.morphisms
            },
            name=f"{F.name}×{G.name}",
        )

    @staticmethod
    def swap_functor(c: FinCat, d: FinCat) -> FinFunctor:
        return FinFunctorFactory.build_entity(
            FinCatServices.product(c, d),
            FinCatServices.product(d, c),
            {pair(x, y): pair(y, x) for x in c.objects for y in d.objects},
            {pair(f, g): pair(g, f) for f in c.morphisms for g in d.morphisms},
            name="swap",
        )

    @staticmethod
    def inverse_functor(F: FinFunctor) -> Optional[FinFunctor]:
        """Returns the inverse of F when F is bijective on objects and morphisms."""
        if len(set(F.obj_map.values())) != len(F.target.objects) or len(
            F.obj_map
        ) != len(F.target.objects):
            return None
        if len(set(F.mor_map.values())) != len(F.target.morphisms) or len(
            F.mor_map
        ) != len(F.target.morphisms):
            return None
        return FinFunctorFactory.build_entity(
            F.target,
            F.source,
            {y: x for x, y in F.obj_map.items()},
            {g: f for f, g in F.mor_map.items()},
            name=f"{F.name}^-1",
        )

    @classmethod
    def find_isomorphism(
        cls, c: FinCat, d: FinCat, max_objects: Optional[int] = None
    ) -> Optional[Tuple[FinFunctor, FinFunctor]]:
        """
        Searches for an isomorphism of categories c -> d.

        Object bijections are enumerated with hom-size pruning; for each one, morphisms are
        assigned hom-set by hom-set with backtracking, checking every composite as soon as
        its three morphisms are assigned.

        Returns:
        - Optional[Tuple[FinFunctor, FinFunctor]]: The isomorphism and its inverse, or None.

        Raises:
        - SizeLimitExceeded: If either category has more objects than the configured bound.
        """
        limit = max_objects if max_objects is not None else settings.MAX_OBJECTS
        if max(len(c.objects), len(d.objects)) > limit:
            raise SizeLimitExceeded(
                item="isomorphism-search",
                message=f"{c.name} or {d.name} exceeds {limit} objects",
            )
        if len(c.objects) != len(d.objects) or len(c.morphisms) != len(d.morphisms):
            return None

        def signature(cat: FinCat, x: str):
            return (
                len(cat.hom(x, x)),
                tuple(sorted(len(cat.hom(x, y)) for y in cat.objects)),
                tuple(sorted(len(cat.hom(y, x)) for y in cat.objects)),
            )

        d_sigs = {y: signature(d, y) for y in d.objects}
        candidates = {
            x: [y for y in d.objects if d_sigs[y] == signature(c, x)]
            for x in c.objects
        }
        order = sorted(c.objects, key=lambda x: len(candidates[x]))

        involving: Dict[str, List[Tuple[str, str, str]]] = {}
        for (g, f), h in c.compose.items():
            for k in {g, f, h}:
                involving.setdefault(k, []).append((g, f, h))

        def assign_morphisms(sigma: Dict[str, str]) -> Optional[Dict[str, str]]:
            images = {c.identity[x]: d.identity[sigma[x]] for x in c.objects}
            pending = [f for f in c.mor_ids if f not in images]
            used = set(images.values())

            def consistent(k: str) -> bool:
                for g, f, h in involving.get(k, ()):
                    if g in images and f in images and h in images:
                        if d.compose.get((images[g], images[f])) != images[h]:
                            return False
                return True

            def search(i: int) -> bool:
                if i == len(pending):
                    return True
                f = pending[i]
                x, y = c.morphisms[f]
                for cand in d.hom(sigma[x], sigma[y]):
                    if cand in used:
                        continue
                    images[f] = cand
                    used.add(cand)
                    if consistent(f) and search(i + 1):
                        return True
                    del images[f]
                    used.discard(cand)
                return False

            if not all(consistent(k) for k in list(images)):
                return None
            return dict(images) if search(0) else None

        def assign_objects(i: int, sigma: Dict[str, str]):
            if i == len(order):
                yield dict(sigma)
                return
            x = order[i]
            for y in candidates[x]:
                if y in sigma.values():
                    continue
                if any(
                    len(c.hom(x, x2)) != len(d.hom(y, y2))
                    or len(c.hom(x2, x)) != len(d.hom(y2, y))
                    for x2, y2 in sigma.items()
                ):
                    continue
                sigma[x] = y
                yield from assign_objects(i + 1, sigma)
                del sigma[x]

        for sigma in assign_objects(0, {}):
            images = assign_morphisms(sigma)
            if images is not None:
                forward = FinFunctorFactory.build_entity(
                    c, d, sigma, images, name=f"iso({c.name},{d.name})"
                )
                log.debug("isomorphism found between %s and %s", c.name, d.name)
                return forward, cls.inverse_functor(forward)
        return None


class NatTransServices:
    """
    Natural transformation calculus.

    Methods:
    - check_nat_trans(t) -> LawReport
    - vertical_compose(beta, alpha) -> NatTrans: beta∘alpha.
    - whisker(t, outer=None, inner=None) -> NatTrans: outer∘t∘inner.
    - horizontal_compose(beta, alpha) -> NatTrans
    - is_invertible(t) -> bool; inverse(t) -> NatTrans
    """

    @staticmethod
    def get_nat_trans_factory() -> Type[NatTransFactory]:
        return NatTransFactory

    @staticmethod
    def check_nat_trans(t: NatTrans) -> LawReport:
        F, G = t.source_fun, t.target_fun
        if not (_same(F.source, G.source) and _same(F.target, G.target)):
            raise ShapeMismatch(
                item="nat-trans-shape",
                message=f"{t.name}: {F.name} and {G.name} are not parallel",
            )
        report = LawReport(subject=f"transformation {t.name}")
        src, tgt = F.source, F.target

        report.law("component-typing")
        for x in src.objects:
            report.tick()
            expected = (F.obj(x), G.obj(x))
            if tgt.morphisms.get(t.at(x)) != expected:
                report.fail(
                    "component-typing",
                    (x,),
                    f"component at {x} should run {expected[0]} -> {expected[1]}",
                )
        if report.violations:
            return report

        report.law("naturality")
        for f in src.mor_ids:
            x, y = src.morphisms[f]
            report.tick()
            if tgt.comp(G.mor(f), t.at(x)) != tgt.comp(t.at(y), F.mor(f)):
                report.fail("naturality", (f,), f"square at {f} does not commute")
        return report

    @staticmethod
    def vertical_compose(beta: NatTrans, alpha: NatTrans) -> NatTrans:
        if alpha.target_fun != beta.source_fun:
            raise ShapeMismatch(
                item="vertical-composition",
                message=f"{beta.name}·{alpha.name}: middle functors differ",
            )
        tgt = alpha.source_fun.target
        return NatTransFactory.build_entity(
            alpha.source_fun,
            beta.target_fun,
            {
                x: tgt.comp(beta.at(x), alpha.at(x))
                for x in alpha.source_fun.source.objects
            },
            name=f"{beta.name}·{alpha.name}",
        )

    @staticmethod
    def whisker(
        t: NatTrans,
        outer: Optional[FinFunctor] = None,
        inner: Optional[FinFunctor] = None,
    ) -> NatTrans:
        """Whiskers t: F => G to outer∘F∘inner => outer∘G∘inner."""
        compose = FinFunctorServices.compose_functors
        F, G = t.source_fun, t.target_fun
        components = dict(t.components)
        if inner is not None:
            F, G = compose(F, inner), compose(G, inner)
            components = {a: t.at(inner.obj(a)) for a in inner.source.objects}
        if outer is not None:
            F, G = compose(outer, F), compose(outer, G)
            components = {a: outer.mor(m) for a, m in components.items()}
        return NatTransFactory.build_entity(F, G, components, name=f"wh({t.name})")

    @staticmethod
    def horizontal_compose(beta: NatTrans, alpha: NatTrans) -> NatTrans:
        """For alpha: F => G on C -> D and beta: H => K on D -> E, returns beta*alpha: HF => KG."""
        H, K = beta.source_fun, beta.target_fun
        F, G = alpha.source_fun, alpha.target_fun
        compose = FinFunctorServices.compose_functors
        tgt = H.target
        return NatTransFactory.build_entity(
            compose(H, F),
            compose(K, G),
            {
                x: tgt.comp(beta.at(G.obj(x)), H.mor(alpha.at(x)))
                for x in F.source.objects
            },
            name=f"{beta.name}*{alpha.name}",
        )

    @staticmethod
    def is_invertible(t: NatTrans) -> bool:
        tgt = t.source_fun.target
        return all(tgt.is_iso(m) for m in t.components.values())

    @staticmethod
    def inverse(t: NatTrans) -> NatTrans:
        tgt = t.source_fun.target
        return NatTransFactory.build_entity(
            t.target_fun,
            t.source_fun,
            {x: tgt.inverse(m) for x, m in t.components.items()},
            name=f"{t.name}^-1",
        )

    @staticmethod
    def components_equal(s: NatTrans, t: NatTrans) -> bool:
        return s.components == t.components and s.source_fun == t.source_fun


class BifunctorServices:
    """
    Checks and composites for functors out of (full subcategories of) binary products.

    Methods:
    - check_bifunctor(B) -> LawReport: Functoriality in each variable plus interchange.
    - postcompose(F, B) -> Bifunctor: F∘B.
    - precompose(B, F, G) -> Bifunctor: B∘(F×G), defined where B is defined on (Fa, Gb).
    - as_functor(B) -> FinFunctor: The same data on the materialized full subcategory of the product.
    """

    @staticmethod
    def get_bifunctor_factory() -> Type[BifunctorFactory]:
        return BifunctorFactory

    @staticmethod
    def check_bifunctor(B: Bifunctor) -> LawReport:
        """
        Checks that B is a functor on the full subcategory of defined pairs.

        A map on pairs is functorial exactly when it is functorial in each variable with the
        other fixed at an identity and each f⊗g agrees with both factorizations
        (f⊗1)∘(1⊗g) and (1⊗g)∘(f⊗1); factorizations through undefined pairs are skipped.

        Raises:
        - MalformedTable: If a morphism pair between defined pairs has no image.
        """
        report = LawReport(subject=f"bifunctor {B.name}")
        L, R, T = B.left, B.right, B.target
        for (a, b) in B.obj_map:
            for f in L.out_of(a):
                for g in R.out_of(b):
                    if B.defined(L.cod(f), R.cod(g)) and (f, g) not in B.mor_map:
                        raise MalformedTable(
                            item="bifunctor-table-incomplete",
                            message=f"{B.name}: no image for ({f}, {g})",
                        )

        report.law("typing")
        for (f, g), h in B.mor_map.items():
            report.tick()
            expected = (B.obj(L.dom(f), R.dom(g)), B.obj(L.cod(f), R.cod(g)))
            if T.morphisms.get(h) != expected:
                report.fail("typing", (f, g), f"image of ({f}, {g}) is mistyped")
            elif not T.has_object(expected[0]):
                report.fail("typing", (f, g), "image leaves the target")
        if report.violations:
            return report

        report.law("identity")
        for (a, b), x in B.obj_map.items():
            report.tick()
            if B.mor(L.id(a), R.id(b)) != T.id(x):
                report.fail("identity", (a, b), f"identity at ({a}, {b}) not preserved")

        report.law("composition")
        for (g, f), h in L.compose.items():
            for b in R.objects:
                if not all(B.defined(x, b) for x in (L.dom(f), L.cod(f), L.cod(g))):
                    continue
                report.tick()
                one = R.id(b)
                if B.mor(h, one) != T.comp(B.mor(g, one), B.mor(f, one)):
                    report.fail("composition", (g, f, b), "not functorial on the left")
        for (g, f), h in R.compose.items():
            for a in L.objects:
                if not all(B.defined(a, y) for y in (R.dom(f), R.cod(f), R.cod(g))):
                    continue
                report.tick()
                one = L.id(a)
                if B.mor(one, h) != T.comp(B.mor(one, g), B.mor(one, f)):
                    report.fail("composition", (a, g, f), "not functorial on the right")

        report.law("interchange")
        for (f, g), h in B.mor_map.items():
            (a, a2), (b, b2) = L.morphisms[f], R.morphisms[g]
            report.tick()
            if B.defined(a, b2) and h != T.comp(
                B.mor(f, R.id(b2)), B.mor(L.id(a), g)
            ):
                report.fail("interchange", (f, g), f"({f}, {g}) != (f,1)∘(1,g)")
            if B.defined(a2, b) and h != T.comp(
                B.mor(L.id(a2), g), B.mor(f, R.id(b))
            ):
                report.fail("interchange", (f, g), f"({f}, {g}) != (1,g)∘(f,1)")
        if not B.is_total:
            report.note(f"{B.name} is partial: {len(B.obj_map)} defined pairs")
        return report

    @staticmethod
    def postcompose(F: FinFunctor, B: Bifunctor, name: str = "") -> Bifunctor:
        if not _same(B.target, F.source):
            raise ShapeMismatch(
                item="bifunctor-composition",
                message=f"{F.name}∘{B.name}: {B.target.name} is not {F.source.name}",
            )
        return BifunctorFactory.build_entity(
            B.left,
            B.right,
            F.target,
            {key: F.obj(x) for key, x in B.obj_map.items()},
            {key: F.mor(h) for key, h in B.mor_map.items()},
            name=name or f"{F.name}∘{B.name}",
        )

    @staticmethod
    def precompose(
        B: Bifunctor, F: FinFunctor, G: FinFunctor, name: str = ""
    ) -> Bifunctor:
        if not (_same(F.target, B.left) and _same(G.target, B.right)):
            raise ShapeMismatch(
                item="bifunctor-composition",
                message=f"{B.name}∘({F.name}×{G.name}): ends do not match",
            )
        return BifunctorFactory.build_from_functions(
            F.source,
            G.source,
            B.target,
            lambda a, b: B.obj_map.get((F.obj(a), G.obj(b))),
            lambda f, g: B.mor(F.mor(f), G.mor(g)),
            name=name or f"{B.name}∘({F.name}×{G.name})",
        )

    @staticmethod
    def as_functor(B: Bifunctor) -> FinFunctor:
        domain = FinCatServices.full_subcategory(
            FinCatServices.product(B.left, B.right),
            [pair(a, b) for (a, b) in B.obj_map],
            name=f"dom({B.name})",
        )
        return FinFunctorFactory.build_entity(
            domain,
            B.target,
            {pair(a, b): x for (a, b), x in B.obj_map.items()},
            {pair(f, g): h for (f, g), h in B.mor_map.items()},
            name=B.name,
        )
