from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional, Tuple

from fibred.domain.fincat.models import (
    Bifunctor,
    FinCat,
    FinFunctor,
    FinFunctorFactory,
    NatTrans,
    NatTransFactory,
)
from fibred.domain.fincat.services import FinFunctorServices
from fibred.domain.moncat.models import MonoidalData, MonoidalFunctorData
from utils.data_manipulation.type_conversion import pair
from utils.django.exceptions import MalformedTable, UnknownObject

CONTRAVARIANT = "contravariant"
COVARIANT = "covariant"
VARIANCES = (CONTRAVARIANT, COVARIANT)

Cells = Dict[tuple, str]


class GrothMor(NamedTuple):
    """
    A morphism (f, k) of the Grothendieck total, together with its ends.

    For contravariant data k: a -> (M f) b lives in M(dom f); for covariant data
    k: (M f) a -> b lives in M(cod f).
    """

    source: Tuple[str, str]
    target: Tuple[str, str]
    base: str
    fibre: str


def _unique(c: FinCat, x: str, y: str) -> str:
    homs = c.hom(x, y)
    if len(homs) != 1:
        raise MalformedTable(
            item="not-thin",
            message=f"{c.name}: {len(homs)} morphisms {x} -> {y}, expected exactly one",
        )
    return homs[0]


def _cell(table: Dict, key, label: str, name: str):
    try:
        return table[key]
    except KeyError:
        raise MalformedTable(
            item=f"missing-{label}", message=f"{name}: no {label} at {key}"
        )


# --------------------------------------------------
# IndexedCat Model
# --------------------------------------------------


@dataclass(frozen=True)
class IndexedCat:
    """
    A pseudofunctor from a finite base into finite categories, as explicit tables.

    Attributes:
    - base (FinCat): The indexing category X.
    - variance (str): "contravariant" (M f: M y -> M x for f: x -> y) or "covariant"
        (M f: M x -> M y).
    - fibre (Dict[str, FinCat]): x -> M x.
    - reindex (Dict[str, FinFunctor]): f -> M f.
    - compositor (Dict[Tuple[str, str], NatTrans]): (g, f) -> δ_{g,f}, running from the
        composite of the two reindexers to M(g∘f).
    - unitor (Dict[str, NatTrans]): x -> γ_x: id ⇒ M(1_x).
    - strict (bool): Claims that every δ and γ is an identity.

    Methods:
    - at(x), fun(f), act(f, a), act_mor(f, k), delta(g, f, a), gamma(x, a)
    - composite_source(g, f): The pair of reindexers δ_{g,f} starts from, in composition order.
    - g_id, g_comp, g_lift, g_ident: Composition of pairs (f, k) in the Grothendieck total,
        without building it.
    """

    base: FinCat
    variance: str
    fibre: Dict[str, FinCat]
    reindex: Dict[str, FinFunctor]
    compositor: Dict[Tuple[str, str], NatTrans]
    unitor: Dict[str, NatTrans]
    strict: bool = False
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"IndexedCat({self.name})"

    @property
    def covariant(self) -> bool:
        return self.variance == COVARIANT

    def at(self, x: str) -> FinCat:
        try:
            return self.fibre[x]
        except KeyError:
            raise UnknownObject(
                item="unknown-object",
                message=f"{x!r} is not an object of {self.base.name}",
            )

    def fun(self, f: str) -> FinFunctor:
        return _cell(self.reindex, f, "reindexer", self.name)

    def act(self, f: str, a: str) -> str:
        return self.fun(f).obj(a)

    def act_mor(self, f: str, k: str) -> str:
        return self.fun(f).mor(k)

    def delta(self, g: str, f: str, a: str) -> str:
        return _cell(self.compositor, (g, f), "compositor", self.name).at(a)

    def gamma(self, x: str, a: str) -> str:
        return _cell(self.unitor, x, "unitor", self.name).at(a)

    def composite_source(self, g: str, f: str) -> Tuple[FinFunctor, FinFunctor]:
        """(outer, inner) with δ_{g,f}: outer∘inner ⇒ M(g∘f)."""
        if self.covariant:
            return self.fun(g), self.fun(f)
        return self.fun(f), self.fun(g)

    # Grothendieck calculus

    def g_ident(self, m: GrothMor) -> str:
        if self.covariant:
            return pair(m.source[1], m.base, m.fibre)
        return pair(m.base, m.fibre, m.target[1])

    def g_id(self, x: str, a: str) -> GrothMor:
        k = self.gamma(x, a)
        if self.covariant:
            k = self.at(x).inverse(k)
        return GrothMor((x, a), (x, a), self.base.id(x), k)

    def g_lift(self, f: str, e: str) -> GrothMor:
        """The canonical (co)cartesian lift (f, 1) at e over cod f (resp. dom f)."""
        x, y = self.base.morphisms[f]
        image = self.act(f, e)
        if self.covariant:
            return GrothMor((x, e), (y, image), f, self.at(y).id(image))
        return GrothMor((x, image), (y, e), f, self.at(x).id(image))

    def g_comp(self, second: GrothMor, first: GrothMor) -> GrothMor:
        if first.target != second.source:
            raise MalformedTable(
                item="not-composable",
                message=f"{second.base} after {first.base}: "
                f"{first.target} != {second.source}",
            )
        g, f = second.base, first.base
        if self.covariant:
            fibre = self.at(self.base.cod(g))
            k = fibre.comp(
                second.fibre,
                self.act_mor(g, first.fibre),
                fibre.inverse(self.delta(g, f, first.source[1])),
            )
        else:
            fibre = self.at(self.base.dom(f))
            k = fibre.comp(
                self.delta(g, f, second.target[1]),
                self.act_mor(f, second.fibre),
                first.fibre,
            )
        return GrothMor(first.source, second.target, self.base.comp(g, f), k)

    def g_typed(self, m: GrothMor) -> bool:
        (x, a), (y, b) = m.source, m.target
        if self.base.morphisms.get(m.base) != (x, y):
            return False
        if self.covariant:
            return self.at(y).morphisms.get(m.fibre) == (self.act(m.base, a), b)
        return self.at(x).morphisms.get(m.fibre) == (a, self.act(m.base, b))


class IndexedCatFactory:
    """
    A factory class for building IndexedCat instances.

    Methods:
    - build_entity(...) -> IndexedCat
    - build_strict(base, variance, fibre, reindex) -> IndexedCat: Identity δ and γ.
    - build_thin(base, variance, fibre, reindex) -> IndexedCat: δ and γ are the unique
        morphisms between their ends, for thin fibres.
    - build_constant(base, c, variance) -> IndexedCat: Δc, every reindexer the identity.
    """

    @staticmethod
    def build_entity(
        base: FinCat,
        variance: str,
        fibre: Dict[str, FinCat],
        reindex: Dict[str, FinFunctor],
        compositor: Dict[Tuple[str, str], NatTrans],
        unitor: Dict[str, NatTrans],
        strict: bool = False,
        name: str = "",
    ) -> IndexedCat:
        if variance not in VARIANCES:
            raise MalformedTable(
                item="unknown-variance",
                message=f"{variance!r} is not one of {VARIANCES}",
            )
        return IndexedCat(
            base=base,
            variance=variance,
            fibre=dict(fibre),
            reindex=dict(reindex),
            compositor=dict(compositor),
            unitor=dict(unitor),
            strict=strict,
            name=name or f"M/{base.name}",
        )

    @classmethod
    def build_strict(
        cls,
        base: FinCat,
        variance: str,
        fibre: Dict[str, FinCat],
        reindex: Dict[str, FinFunctor],
        name: str = "",
    ) -> IndexedCat:
        """
        Fills δ and γ with identity components, for reindexers that compose on the nose.

        Whether they really do is left to check_pseudofunctor.
        """
        return cls._build_filled(
            base, variance, fibre, reindex, lambda c, x, y: c.id(x), True, name
        )

    @classmethod
    def build_thin(
        cls,
        base: FinCat,
        variance: str,
        fibre: Dict[str, FinCat],
        reindex: Dict[str, FinFunctor],
        name: str = "",
    ) -> IndexedCat:
        """
        Fills δ and γ with the unique morphism between their ends.

        Raises:
        - MalformedTable: If some pair of ends has no or several morphisms.
        """
        return cls._build_filled(base, variance, fibre, reindex, _unique, False, name)

    @classmethod
    def _build_filled(cls, base, variance, fibre, reindex, fill, strict, name):
        draft = cls.build_entity(base, variance, fibre, reindex, {}, {}, name=name)
        compositor = {}
        for g, f in base.composable_pairs():
            outer, inner = draft.composite_source(g, f)
            source = FinFunctorServices.compose_functors(outer, inner)
            target = reindex[base.comp(g, f)]
            compositor[(g, f)] = NatTransFactory.build_entity(
                source,
                target,
                {
                    a: fill(source.target, source.obj(a), target.obj(a))
                    for a in source.source.objects
                },
            )
        unitor = {}
        for x in base.objects:
            one = reindex[base.id(x)]
            unitor[x] = NatTransFactory.build_entity(
                FinFunctorFactory.build_identity(fibre[x]),
                one,
                {a: fill(fibre[x], a, one.obj(a)) for a in fibre[x].objects},
            )
        return cls.build_entity(
            base, variance, fibre, reindex, compositor, unitor, strict=strict, name=name
        )

    @classmethod
    def build_constant(
        cls, base: FinCat, c: FinCat, variance: str = CONTRAVARIANT, name: str = ""
    ) -> IndexedCat:
        """Δc: every fibre is c and every reindexer the identity."""
        one = FinFunctorFactory.build_identity(c)
        return cls.build_strict(
            base,
            variance,
            {x: c for x in base.objects},
            {f: one for f in base.morphisms},
            name=name or f"Δ{c.name}",
        )


# --------------------------------------------------
# LaxMonoidalIndexed Model
# --------------------------------------------------


@dataclass(frozen=True)
class LaxMonoidalIndexed:
    """
    A lax monoidal pseudofunctor over a monoidal base.

    Structure cells are stored as component tables. Each component is the fibre part of
    the corresponding structure morphism of the Grothendieck total, except ξ, which is
    stored in the opposite direction:

    - laxator_cells[(f, g)][(a, b)]: μ_{f,g}; covariant M(f⊗g)μ(a, b) -> μ(Mf a, Mg b),
        contravariant μ(Mf a, Mg b) -> M(f⊗g)μ(a, b) with a, b over the codomains.
    - omega[(x, y, z)][(a, b, c)]: fibre part of (α_{x,y,z}, ω) between μ(μ(a, b), c)
        and μ(a, μ(b, c)).
    - xi[x][a]: inverse fibre part of the left unitor (l_x, ξ^{-1}).
    - zeta[x][a]: fibre part of the right unitor (r_x, ζ).
    - braid_cell[(x, y)][(a, b)]: fibre part of the braiding (b_{x,y}, v).

    Attributes:
    - carrier (IndexedCat)
    - base_monoidal (MonoidalData): Monoidal structure on carrier.base.
    - laxator (Dict[Tuple[str, str], Bifunctor]): μ_{x,y}: M x × M y -> M(x⊗y).
    - unit_obj (str): μ_0, an object of M(I).
    """

    carrier: IndexedCat
    base_monoidal: MonoidalData
    laxator: Dict[Tuple[str, str], Bifunctor]
    laxator_cells: Dict[Tuple[str, str], Cells]
    unit_obj: str
    omega: Dict[Tuple[str, str, str], Cells]
    xi: Dict[str, Dict[str, str]]
    zeta: Dict[str, Dict[str, str]]
    braid_cell: Optional[Dict[Tuple[str, str], Cells]] = None
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"LaxMonoidalIndexed({self.name})"

    @property
    def base(self) -> FinCat:
        return self.carrier.base

    def mu(self, x: str, y: str, a: str, b: str) -> str:
        return self.laxator_at(x, y).obj(a, b)

    def mu_mor(self, x: str, y: str, k: str, l: str) -> str:
        return self.laxator_at(x, y).mor(k, l)

    def mu_cell(self, f: str, g: str, a: str, b: str) -> str:
        cell = _cell(self.laxator_cells, (f, g), "laxator-cell", self.name)
        return _cell(cell, (a, b), "laxator-cell", self.name)

    def laxator_at(self, x: str, y: str) -> Bifunctor:
        try:
            return self.laxator[(x, y)]
        except KeyError:
            raise UnknownObject(
                item="undefined-laxator",
                message=f"{self.name}: μ at ({x}, {y}) is outside the universe",
            )

    # Structure morphisms of the Grothendieck total

    def home(self, m: GrothMor) -> FinCat:
        """The fibre the component of m lives in."""
        x = m.target[0] if self.carrier.covariant else m.source[0]
        return self.carrier.at(x)

    def g_unit(self) -> Tuple[str, str]:
        return self.base_monoidal.unit, self.unit_obj

    def g_tensor_obj(self, p: Tuple[str, str], q: Tuple[str, str]) -> Tuple[str, str]:
        (x, a), (y, b) = p, q
        return self.base_monoidal.t(x, y), self.mu(x, y, a, b)

    def g_tensor(self, m1: GrothMor, m2: GrothMor) -> GrothMor:
        (x, a), (x2, a2) = m1.source, m1.target
        (y, b), (y2, b2) = m2.source, m2.target
        f, g = m1.base, m2.base
        source = self.g_tensor_obj(m1.source, m2.source)
        target = self.g_tensor_obj(m1.target, m2.target)
        if self.carrier.covariant:
            k = self.carrier.at(target[0]).comp(
                self.mu_mor(x2, y2, m1.fibre, m2.fibre), self.mu_cell(f, g, a, b)
            )
        else:
            k = self.carrier.at(source[0]).comp(
                self.mu_cell(f, g, a2, b2), self.mu_mor(x, y, m1.fibre, m2.fibre)
            )
        return GrothMor(source, target, self.base_monoidal.tm(f, g), k)

    def g_alpha(self, p, q, r) -> GrothMor:
        (x, a), (y, b), (z, c) = p, q, r
        cell = _cell(self.omega, (x, y, z), "omega", self.name)
        return GrothMor(
            self.g_tensor_obj(self.g_tensor_obj(p, q), r),
            self.g_tensor_obj(p, self.g_tensor_obj(q, r)),
            self.base_monoidal.alpha(x, y, z),
            _cell(cell, (a, b, c), "omega", self.name),
        )

    def g_lambda(self, p) -> GrothMor:
        x, a = p
        m = GrothMor(
            self.g_tensor_obj(self.g_unit(), p),
            p,
            self.base_monoidal.lam(x),
            _cell(_cell(self.xi, x, "xi", self.name), a, "xi", self.name),
        )
        return m._replace(fibre=self.home(m).inverse(m.fibre))

    def g_rho(self, p) -> GrothMor:
        x, a = p
        return GrothMor(
            self.g_tensor_obj(p, self.g_unit()),
            p,
            self.base_monoidal.rho(x),
            _cell(_cell(self.zeta, x, "zeta", self.name), a, "zeta", self.name),
        )

    def g_beta(self, p, q) -> GrothMor:
        (x, a), (y, b) = p, q
        if self.braid_cell is None:
            raise MalformedTable(
                item="no-braid-cell", message=f"{self.name} has no braiding"
            )
        cell = _cell(self.braid_cell, (x, y), "braid-cell", self.name)
        return GrothMor(
            self.g_tensor_obj(p, q),
            self.g_tensor_obj(q, p),
            self.base_monoidal.beta(x, y),
            _cell(cell, (a, b), "braid-cell", self.name),
        )


class LaxMonoidalIndexedFactory:
    """
    Methods:
    - build_entity(...) -> LaxMonoidalIndexed
    - build_strict(carrier, base_monoidal, laxator, unit_obj) -> LaxMonoidalIndexed: Every
        structure cell an identity.
    - build_thin(carrier, base_monoidal, laxator, unit_obj) -> LaxMonoidalIndexed: Every
        structure cell the unique morphism between its ends, for thin fibres.
    """

    @staticmethod
    def build_entity(
        carrier: IndexedCat,
        base_monoidal: MonoidalData,
        laxator: Dict[Tuple[str, str], Bifunctor],
        laxator_cells: Dict[Tuple[str, str], Cells],
        unit_obj: str,
        omega: Dict[Tuple[str, str, str], Cells],
        xi: Dict[str, Dict[str, str]],
        zeta: Dict[str, Dict[str, str]],
        braid_cell: Optional[Dict[Tuple[str, str], Cells]] = None,
        name: str = "",
    ) -> LaxMonoidalIndexed:
        return LaxMonoidalIndexed(
            carrier=carrier,
            base_monoidal=base_monoidal,
            laxator=dict(laxator),
            laxator_cells=dict(laxator_cells),
            unit_obj=unit_obj,
            omega=dict(omega),
            xi=dict(xi),
            zeta=dict(zeta),
            braid_cell=dict(braid_cell) if braid_cell is not None else None,
            name=name or f"({carrier.name}, μ)",
        )

    @classmethod
    def build_strict(
        cls,
        carrier: IndexedCat,
        base_monoidal: MonoidalData,
        laxator: Dict[Tuple[str, str], Bifunctor],
        unit_obj: str,
        braided: bool = False,
        name: str = "",
    ) -> LaxMonoidalIndexed:
        """
        Fills every structure cell with an identity component.

        The identity is taken on the end the component lives on; wherever the two ends
        differ the cell is mistyped, which check_lax_monoidal reports.
        """
        return cls._build_filled(
            carrier,
            base_monoidal,
            laxator,
            unit_obj,
            braided,
            name,
            lambda c, x, y: c.id(y if carrier.covariant else x),
        )

    @classmethod
    def build_thin(
        cls,
        carrier: IndexedCat,
        base_monoidal: MonoidalData,
        laxator: Dict[Tuple[str, str], Bifunctor],
        unit_obj: str,
        braided: bool = False,
        name: str = "",
    ) -> LaxMonoidalIndexed:
        """
        Fills every structure cell with the unique morphism between its ends.

        Raises:
        - MalformedTable: If a fibre is not thin where a cell is needed.
        """
        return cls._build_filled(
            carrier, base_monoidal, laxator, unit_obj, braided, name, _unique
        )

    @classmethod
    def _build_filled(
        cls, carrier, base_monoidal, laxator, unit_obj, braided, name, fill
    ):
        draft = cls.build_entity(
            carrier, base_monoidal, laxator, {}, unit_obj, {}, {}, {}, name=name
        )
        T, M = base_monoidal, carrier
        covariant = M.covariant

        def cell(base_mor, source, target):
            # fibre part of a structure morphism between two objects of the total
            if covariant:
                home = M.at(target[0])
                return fill(home, M.act(base_mor, source[1]), target[1])
            home = M.at(source[0])
            return fill(home, source[1], M.act(base_mor, target[1]))

        laxator_cells: Dict[Tuple[str, str], Cells] = {}
        for (f, g), fg in T.tensor.mor_map.items():
            (x, x2), (y, y2) = T.base.morphisms[f], T.base.morphisms[g]
            if (x, y) not in laxator or (x2, y2) not in laxator:
                continue
            ends = laxator[(x, y)] if covariant else laxator[(x2, y2)]
            cells = {}
            for (a, b) in ends.obj_map:
                try:
                    if covariant:
                        source = draft.g_tensor_obj((x, a), (y, b))
                        target = draft.g_tensor_obj(
                            (x2, M.act(f, a)), (y2, M.act(g, b))
                        )
                    else:
                        source = draft.g_tensor_obj((x, M.act(f, a)), (y, M.act(g, b)))
                        target = draft.g_tensor_obj((x2, a), (y2, b))
                    cells[(a, b)] = cell(fg, source, target)
                except UnknownObject:
                    continue
            laxator_cells[(f, g)] = cells

        omega: Dict[Tuple[str, str, str], Cells] = {}
        for (x, y), xy in T.tensor.obj_map.items():
            for z in T.base.objects:
                if not (
                    T.defined(xy, z) and T.defined(y, z) and T.defined(x, T.t(y, z))
                ):
                    continue
                alpha = T.alpha(x, y, z)
                cells = {}
                for a in M.at(x).objects:
                    for b in M.at(y).objects:
                        for c in M.at(z).objects:
                            p, q, r = (x, a), (y, b), (z, c)
                            try:
                                source = draft.g_tensor_obj(draft.g_tensor_obj(p, q), r)
                                target = draft.g_tensor_obj(p, draft.g_tensor_obj(q, r))
                            except UnknownObject:
                                continue
                            cells[(a, b, c)] = cell(alpha, source, target)
                omega[(x, y, z)] = cells

        xi: Dict[str, Dict[str, str]] = {}
        zeta: Dict[str, Dict[str, str]] = {}
        unit = draft.g_unit()
        for x in T.base.objects:
            for a in M.at(x).objects:
                p = (x, a)
                try:
                    m = GrothMor(draft.g_tensor_obj(unit, p), p, T.lam(x), "")
                    k = cell(m.base, m.source, m.target)
                    xi.setdefault(x, {})[a] = draft.home(m).inverse(k)
                except UnknownObject:
                    pass
                try:
                    zeta.setdefault(x, {})[a] = cell(
                        T.rho(x), draft.g_tensor_obj(p, unit), p
                    )
                except UnknownObject:
                    pass

        braid_cell = None
        if braided:
            braid_cell = {}
            for (x, y) in T.tensor.obj_map:
                if not T.defined(y, x):
                    continue
                cells = {}
                for a in M.at(x).objects:
                    for b in M.at(y).objects:
                        p, q = (x, a), (y, b)
                        try:
                            source = draft.g_tensor_obj(p, q)
                            target = draft.g_tensor_obj(q, p)
                        except UnknownObject:
                            continue
                        cells[(a, b)] = cell(T.beta(x, y), source, target)
                braid_cell[(x, y)] = cells
        return cls.build_entity(
            carrier,
            base_monoidal,
            laxator,
            laxator_cells,
            unit_obj,
            omega,
            xi,
            zeta,
            braid_cell=braid_cell,
            name=name,
        )


# --------------------------------------------------
# Indexed1Cell Model
# --------------------------------------------------


@dataclass(frozen=True)
class MonoidalPart:
    """
    Monoidal structure on an indexed 1-cell.

    Attributes:
    - base_functor (MonoidalFunctorData): (F, ψ, ψ_0) on the base.
    - cells (Dict[Tuple[str, str], Cells]): m_{x,y}[(a, b)], the fibre part of the total
        laxator (ψ_{x,y}, m) between ν(τ_x a, τ_y b) and τ_{x⊗y} μ(a, b).
    - unit_cell (str): m_0, the fibre part of (ψ_0, m_0) between ν_0 and τ_I μ_0.
    """

    base_functor: MonoidalFunctorData
    cells: Dict[Tuple[str, str], Cells]
    unit_cell: str


@dataclass(frozen=True)
class Indexed1Cell:
    """
    A pseudonatural transformation τ: M ⇒ N over a base functor F.

    Squares: covariant τ_f: N(Ff)∘τ_x ⇒ τ_y∘M f, contravariant τ_f: τ_x∘M f ⇒ N(Ff)∘τ_y,
    for f: x -> y.

    Attributes:
    - source (IndexedCat), target (IndexedCat)
    - base_fun (FinFunctor): F.
    - components (Dict[str, FinFunctor]): x -> τ_x: M x -> N(F x).
    - squares (Dict[str, NatTrans]): f -> τ_f.
    - monoidal_part (Optional[MonoidalPart])
    """

    source: IndexedCat
    target: IndexedCat
    base_fun: FinFunctor
    components: Dict[str, FinFunctor]
    squares: Dict[str, NatTrans]
    monoidal_part: Optional[MonoidalPart] = None
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"Indexed1Cell({self.name})"

    def tau(self, x: str) -> FinFunctor:
        return _cell(self.components, x, "component", self.name)

    def square(self, f: str, e: str) -> str:
        return _cell(self.squares, f, "square", self.name).at(e)

    def transport_obj(self, p: Tuple[str, str]) -> Tuple[str, str]:
        x, a = p
        return self.base_fun.obj(x), self.tau(x).obj(a)

    def transport(self, m: GrothMor) -> GrothMor:
        """P_τ on a morphism (f, k) of the source total."""
        (x, a), (y, b) = m.source, m.target
        source, target = self.transport_obj(m.source), self.transport_obj(m.target)
        f = m.base
        if self.source.covariant:
            fibre = self.target.at(target[0])
            k = fibre.comp(self.tau(y).mor(m.fibre), self.square(f, a))
        else:
            fibre = self.target.at(source[0])
            k = fibre.comp(self.square(f, b), self.tau(x).mor(m.fibre))
        return GrothMor(source, target, self.base_fun.mor(f), k)


class Indexed1CellFactory:
    """
    Methods:
    - build_entity(...) -> Indexed1Cell
    - build_identity(m) -> Indexed1Cell
    - build_inclusion(m, n, base_fun) -> Indexed1Cell: Fibres of m are full subcategories
        of the fibres of n over F, reindexing agrees, and every square is an identity.
    """

    @staticmethod
    def build_entity(
        source: IndexedCat,
        target: IndexedCat,
        base_fun: FinFunctor,
        components: Dict[str, FinFunctor],
        squares: Dict[str, NatTrans],
        monoidal_part: Optional[MonoidalPart] = None,
        name: str = "",
    ) -> Indexed1Cell:
        return Indexed1Cell(
            source,
            target,
            base_fun,
            dict(components),
            dict(squares),
            monoidal_part,
            name=name or f"{source.name} => {target.name}",
        )

    @classmethod
    def build_identity(cls, m: IndexedCat) -> Indexed1Cell:
        return cls.build_inclusion(
            m, m, FinFunctorFactory.build_identity(m.base), name=f"1_{m.name}"
        )

    @classmethod
    def build_inclusion(
        cls, m: IndexedCat, n: IndexedCat, base_fun: FinFunctor, name: str = ""
    ) -> Indexed1Cell:
        components = {
            x: FinFunctorFactory.build_entity(
                m.at(x),
                n.at(base_fun.obj(x)),
                {a: a for a in m.at(x).objects},
                {k: k for k in m.at(x).morphisms},
                name=f"ι_{x}",
            )
            for x in m.base.objects
        }
        squares = {}
        compose = FinFunctorServices.compose_functors
        for f in m.base.morphisms:
            x, y = m.base.morphisms[f]
            nf = n.fun(base_fun.mor(f))
            if m.covariant:
                source = compose(nf, components[x])
                target = compose(components[y], m.fun(f))
            else:
                source = compose(components[x], m.fun(f))
                target = compose(nf, components[y])
            squares[f] = NatTransFactory.build_entity(
                source,
                target,
                {e: source.target.id(source.obj(e)) for e in source.source.objects},
                name=f"τ_{f}",
            )
        return cls.build_entity(m, n, base_fun, components, squares, name=name)


# --------------------------------------------------
# Indexed2Cell Model
# --------------------------------------------------


@dataclass(frozen=True)
class Indexed2Cell:
    """
    A modification m between indexed 1-cells τ (over F) and σ (over G), above α: F ⇒ G.

    Components: covariant m_x: N(α_x)∘τ_x ⇒ σ_x, contravariant m_x: τ_x ⇒ N(α_x)∘σ_x.

    Attributes:
    - source (Indexed1Cell): τ.
    - target (Indexed1Cell): σ.
    - base_nat (NatTrans): α.
    - modification (Dict[str, NatTrans]): x -> m_x.
    """

    source: Indexed1Cell
    target: Indexed1Cell
    base_nat: NatTrans
    modification: Dict[str, NatTrans]
    name: str = field(default="", compare=False)

    def component(self, p: Tuple[str, str]) -> GrothMor:
        """(P_m) at the object p of the source total: (α_x, (m_x)_a)."""
        x, a = p
        m_x = _cell(self.modification, x, "modification", self.name)
        return GrothMor(
            self.source.transport_obj(p),
            self.target.transport_obj(p),
            self.base_nat.at(x),
            m_x.at(a),
        )


class Indexed2CellFactory:
    @staticmethod
    def build_entity(
        source: Indexed1Cell,
        target: Indexed1Cell,
        base_nat: NatTrans,
        modification: Dict[str, NatTrans],
        name: str = "",
    ) -> Indexed2Cell:
        return Indexed2Cell(source, target, base_nat, dict(modification), name=name)

    @classmethod
    def build_identity(cls, c: Indexed1Cell) -> Indexed2Cell:
        alpha = NatTransFactory.build_identity(c.base_fun)
        modification = {}
        for x in c.source.base.objects:
            tau = c.tau(x)
            reindex = c.target.fun(alpha.at(x))
            if c.source.covariant:
                source, target = FinFunctorServices.compose_functors(reindex, tau), tau
            else:
                source, target = tau, FinFunctorServices.compose_functors(reindex, tau)
            modification[x] = NatTransFactory.build_entity(
                source,
                target,
                {
                    a: c.target.g_id(c.base_fun.obj(x), tau.obj(a)).fibre
                    for a in tau.source.objects
                },
                name=f"1_{x}",
            )
        return cls.build_entity(c, c, alpha, modification, name=f"1_{c.name}")

