import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Sequence, Tuple

import yaml
from jsonschema.exceptions import best_match

from fibred.domain.corr.models import FibrewiseMonoidal, FibrewiseMonoidalFactory
from fibred.domain.fib.models import (
    ClovenFibration,
    ClovenFibrationFactory,
    MonoidalFibrationData,
)
from fibred.domain.fincat.models import (
    Bifunctor,
    BifunctorFactory,
    FinCat,
    FinCatFactory,
    FinFunctor,
    FinFunctorFactory,
    LawReport,
    LawViolation,
    NatTrans,
    NatTransFactory,
)
from fibred.domain.fincat.services import FinFunctorServices
from fibred.domain.indexed.models import (
    COVARIANT,
    IndexedCat,
    IndexedCatFactory,
    LaxMonoidalIndexed,
    LaxMonoidalIndexedFactory,
)
from fibred.domain.moncat.models import (
    MonoidalData,
    MonoidalFactory,
    MonoidalFunctorData,
    MonoidalFunctorFactory,
)
from utils.django.exceptions import (
    MalformedTable,
    ParseError,
    ShapeMismatch,
    UnknownObject,
)

from .schemas import KINDS, VALIDATORS

log = logging.getLogger(__name__)

Where = Tuple[Any, ...]


def _where(path: Where) -> str:
    return ".".join(str(p) for p in path)


def _rows(table: Dict) -> List[List[str]]:
    """Sorted rows [*key, value] of a table keyed by identifiers or tuples of them."""
    return sorted(
        [*key, value] if isinstance(key, tuple) else [key, value]
        for key, value in table.items()
    )


def _table(rows: Iterable[Sequence[str]], path: Where, width: int = 0) -> Dict:
    """
    Inverse of _rows. The key is the first `width` entries, by default all but the last;
    a single remaining entry is the value, several form a tuple.
    """
    table = {}
    for index, row in enumerate(rows):
        cut = width or len(row) - 1
        key = row[0] if cut == 1 else tuple(row[:cut])
        rest = row[cut:]
        if key in table:
            raise ParseError(
                item="duplicate-row",
                message=f"{key} appears twice",
                field=_where((*path, index)),
            )
        table[key] = rest[0] if len(rest) == 1 else tuple(rest)
    return table


def _cover(table: Dict, expected: Iterable[str], path: Where) -> None:
    missing = sorted(set(expected) - set(table))
    unknown = sorted(set(table) - set(expected))
    if missing or unknown:
        raise ParseError(
            item="incomplete-table",
            message=f"missing {missing}, unknown {unknown}",
            field=_where(path),
        )


def _line_of(text: str, path: Sequence) -> Any:
    """The 1-based line of the node at `path`, or of its deepest existing ancestor."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return None
    if node is None:
        return None
    for key in path:
        found = None
        if isinstance(node, yaml.MappingNode):
            found = next((v for k, v in node.value if k.value == str(key)), None)
        elif isinstance(node, yaml.SequenceNode) and str(key).isdigit():
            index = int(key)
            found = node.value[index] if index < len(node.value) else None
        if found is None:
            break
        node = found
    return node.start_mark.line + 1


# --------------------------------------------------
# Encoders
# --------------------------------------------------


def _fincat_data(c: FinCat) -> dict:
    return {
        "name": c.name,
        "objects": list(c.objects),
        "morphisms": sorted([f, d, e] for f, (d, e) in c.morphisms.items()),
        "identity": _rows(c.identity),
        "compose": _rows(c.compose),
    }


def _tables_data(F) -> dict:
    return {"name": F.name, "objects": _rows(F.obj_map), "morphisms": _rows(F.mor_map)}


def _functor_data(F: FinFunctor) -> dict:
    return {
        **_tables_data(F),
        "source": _fincat_data(F.source),
        "target": _fincat_data(F.target),
    }


def _nattrans_data(t: NatTrans) -> dict:
    return {
        "name": t.name,
        "source": _functor_data(t.source_fun),
        "target": _functor_data(t.target_fun),
        "components": _rows(t.components),
    }


def _monoidal_data(m: MonoidalData, with_base: bool = True) -> dict:
    data = {
        "name": m.name,
        "tensor": _tables_data(m.tensor),
        "unit": m.unit,
        "associator": _rows(m.associator),
        "left_unitor": _rows(m.left_unitor),
        "right_unitor": _rows(m.right_unitor),
        "braiding": None if m.braiding is None else _rows(m.braiding),
        "symmetric": m.symmetric,
    }
    if with_base:
        data["base"] = _fincat_data(m.base)
    return data


def _indexed_data(m: IndexedCat) -> dict:
    return {
        "name": m.name,
        "variance": m.variance,
        "strict": m.strict,
        "base": _fincat_data(m.base),
        "fibres": {x: _fincat_data(c) for x, c in m.fibre.items()},
        "reindex": {f: _tables_data(F) for f, F in m.reindex.items()},
        "compositor": [
            {"g": g, "f": f, "components": _rows(m.compositor[(g, f)].components)}
            for g, f in sorted(m.compositor)
        ],
        "unitor": {x: _rows(t.components) for x, t in m.unitor.items()},
    }


def _cells_data(table: Dict[tuple, Dict], keys: Sequence[str]) -> List[dict]:
    return [
        {**dict(zip(keys, key)), "cells": _rows(table[key])} for key in sorted(table)
    ]


def _lax_monoidal_data(l: LaxMonoidalIndexed) -> dict:
    return {
        "name": l.name,
        "carrier": _indexed_data(l.carrier),
        "base_monoidal": _monoidal_data(l.base_monoidal),
        "laxator": [
            {"x": x, "y": y, **_tables_data(l.laxator[(x, y)])}
            for x, y in sorted(l.laxator)
        ],
        "laxator_cells": _cells_data(l.laxator_cells, ("f", "g")),
        "unit_obj": l.unit_obj,
        "omega": _cells_data(l.omega, ("x", "y", "z")),
        "xi": {x: _rows(cells) for x, cells in l.xi.items()},
        "zeta": {x: _rows(cells) for x, cells in l.zeta.items()},
        "braid_cell": (
            None if l.braid_cell is None else _cells_data(l.braid_cell, ("x", "y"))
        ),
    }


def _fibration_data(p: ClovenFibration) -> dict:
    return {
        "name": p.name,
        "direction": p.direction,
        "split": p.split,
        "total": _fincat_data(p.total),
        "base": _fincat_data(p.base),
        "projection": _tables_data(p.proj),
        "cleavage": _rows(p.cleavage),
    }


def _monoidal_fibration_data(m: MonoidalFibrationData) -> dict:
    return {
        "name": m.name,
        "carrier": _fibration_data(m.carrier),
        "total_monoidal": _monoidal_data(m.total_monoidal),
        "base_monoidal": _monoidal_data(m.base_monoidal),
    }


def _structure_data(F: MonoidalFunctorData) -> dict:
    return {
        "laxator": _rows(F.laxator),
        "unit_mor": F.unit_mor,
        "strength": F.strength,
    }


def _fibrewise_data(f: FibrewiseMonoidal) -> dict:
    return {
        "name": f.name,
        "carrier": _indexed_data(f.carrier),
        "per_fibre": {
            x: _monoidal_data(m, with_base=False) for x, m in f.per_fibre.items()
        },
        "reindex_monoidal": {
            g: _structure_data(F) for g, F in f.reindex_monoidal.items()
        },
        "skipped": list(f.skipped),
        "base_monoidal": (
            None if f.base_monoidal is None else _monoidal_data(f.base_monoidal)
        ),
    }


def _report_data(report: LawReport) -> dict:
    return {
        "subject": report.subject,
        "passed": report.passed,
        "checked": list(report.checked),
        "violations": [
            {
                "law": v.law,
                "witness": [str(item) for item in v.witness],
                "message": v.message,
            }
            for v in report.violations
        ],
        "notes": list(report.notes),
        "instances": report.instances,
        "skipped": dict(report.skipped),
    }


ENCODERS: Dict[type, Tuple[str, Callable[[Any], dict]]] = {
    FinCat: ("fincat", _fincat_data),
    FinFunctor: ("functor", _functor_data),
    NatTrans: ("nattrans", _nattrans_data),
    MonoidalData: ("monoidal", _monoidal_data),
    IndexedCat: ("indexed", _indexed_data),
    LaxMonoidalIndexed: ("lax_monoidal", _lax_monoidal_data),
    ClovenFibration: ("fibration", _fibration_data),
    MonoidalFibrationData: ("monoidal_fibration", _monoidal_fibration_data),
    FibrewiseMonoidal: ("fibrewise", _fibrewise_data),
    LawReport: ("report", _report_data),
}


# --------------------------------------------------
# Decoders
# --------------------------------------------------


def _fincat(data: dict, path: Where) -> FinCat:
    return FinCatFactory.build_entity(
        objects=data["objects"],
        morphisms=_table(data["morphisms"], (*path, "morphisms"), width=1),
        identity=_table(data["identity"], (*path, "identity")),
        compose=_table(data["compose"], (*path, "compose")),
        name=data.get("name", ""),
    )


def _functor_tables(source: FinCat, target: FinCat, data: dict, path: Where):
    return FinFunctorFactory.build_entity(
        source,
        target,
        _table(data["objects"], (*path, "objects")),
        _table(data["morphisms"], (*path, "morphisms")),
        name=data.get("name", ""),
    )


def _functor(data: dict, path: Where) -> FinFunctor:
    return _functor_tables(
        _fincat(data["source"], (*path, "source")),
        _fincat(data["target"], (*path, "target")),
        data,
        path,
    )


def _nattrans(data: dict, path: Where) -> NatTrans:
    return NatTransFactory.build_entity(
        _functor(data["source"], (*path, "source")),
        _functor(data["target"], (*path, "target")),
        _table(data["components"], (*path, "components")),
        name=data.get("name", ""),
    )


def _bifunctor(left, right, target, data: dict, path: Where) -> Bifunctor:
    return BifunctorFactory.build_entity(
        left,
        right,
        target,
        _table(data["objects"], (*path, "objects"), width=2),
        _table(data["morphisms"], (*path, "morphisms"), width=2),
        name=data.get("name", ""),
    )


def _monoidal(data: dict, path: Where, base: FinCat = None) -> MonoidalData:
    base = base or _fincat(data["base"], (*path, "base"))
    braiding = data.get("braiding")
    return MonoidalFactory.build_entity(
        base,
        _bifunctor(base, base, base, data["tensor"], (*path, "tensor")),
        data["unit"],
        _table(data["associator"], (*path, "associator"), width=3),
        _table(data["left_unitor"], (*path, "left_unitor")),
        _table(data["right_unitor"], (*path, "right_unitor")),
        braiding=(
            None
            if braiding is None
            else _table(braiding, (*path, "braiding"), width=2)
        ),
        symmetric=data.get("symmetric", False),
        name=data.get("name", ""),
    )


def _indexed(data: dict, path: Where) -> IndexedCat:
    base = _fincat(data["base"], (*path, "base"))
    variance = data["variance"]
    _cover(data["fibres"], base.objects, (*path, "fibres"))
    _cover(data["reindex"], base.morphisms, (*path, "reindex"))
    fibre = {
        x: _fincat(body, (*path, "fibres", x)) for x, body in data["fibres"].items()
    }
    reindex = {}
    for f, body in data["reindex"].items():
        x, y = base.morphisms[f]
        ends = (fibre[x], fibre[y]) if variance == COVARIANT else (fibre[y], fibre[x])
        reindex[f] = _functor_tables(*ends, body, (*path, "reindex", f))
    draft = IndexedCatFactory.build_entity(base, variance, fibre, reindex, {}, {})
    compositor = {}
    for index, entry in enumerate(data["compositor"]):
        g, f = entry["g"], entry["f"]
        where = (*path, "compositor", index)
        try:
            source = FinFunctorServices.compose_functors(*draft.composite_source(g, f))
            target = reindex[base.comp(g, f)]
        except (MalformedTable, ShapeMismatch, UnknownObject) as error:
            raise ParseError(
                item=error.item, message=error.message, field=_where(where)
            )
        components = _table(entry["components"], (*where, "components"))
        compositor[(g, f)] = NatTransFactory.build_entity(source, target, components)
    _cover(data["unitor"], base.objects, (*path, "unitor"))
    unitor = {
        x: NatTransFactory.build_entity(
            FinFunctorFactory.build_identity(fibre[x]),
            reindex[base.id(x)],
            _table(rows, (*path, "unitor", x)),
        )
        for x, rows in data["unitor"].items()
    }
    return IndexedCatFactory.build_entity(
        base,
        variance,
        fibre,
        reindex,
        compositor,
        unitor,
        strict=data.get("strict", False),
        name=data.get("name", ""),
    )


def _cells(entries: List[dict], keys: Sequence[str], path: Where) -> Dict:
    table = {}
    for index, entry in enumerate(entries):
        key = tuple(entry[k] for k in keys)
        if key in table:
            raise ParseError(
                item="duplicate-row",
                message=f"{key} appears twice",
                field=_where((*path, index)),
            )
        table[key] = _table(entry["cells"], (*path, index, "cells"), width=len(keys))
    return table


def _lax_monoidal(data: dict, path: Where) -> LaxMonoidalIndexed:
    carrier = _indexed(data["carrier"], (*path, "carrier"))
    T = _monoidal(data["base_monoidal"], (*path, "base_monoidal"))
    laxator = {}
    for index, entry in enumerate(data["laxator"]):
        x, y = entry["x"], entry["y"]
        where = (*path, "laxator", index)
        try:
            ends = carrier.at(x), carrier.at(y), carrier.at(T.t(x, y))
        except UnknownObject as error:
            raise ParseError(
                item=error.item, message=error.message, field=_where(where)
            )
        laxator[(x, y)] = _bifunctor(*ends, entry, where)
    braid_cell = data.get("braid_cell")
    return LaxMonoidalIndexedFactory.build_entity(
        carrier,
        T,
        laxator,
        _cells(data["laxator_cells"], ("f", "g"), (*path, "laxator_cells")),
        data["unit_obj"],
        _cells(data["omega"], ("x", "y", "z"), (*path, "omega")),
        {x: _table(rows, (*path, "xi", x)) for x, rows in data["xi"].items()},
        {x: _table(rows, (*path, "zeta", x)) for x, rows in data["zeta"].items()},
        braid_cell=(
            None
            if braid_cell is None
            else _cells(braid_cell, ("x", "y"), (*path, "braid_cell"))
        ),
        name=data.get("name", ""),
    )


def _fibration(data: dict, path: Where) -> ClovenFibration:
    total = _fincat(data["total"], (*path, "total"))
    base = _fincat(data["base"], (*path, "base"))
    return ClovenFibrationFactory.build_entity(
        total,
        base,
        _functor_tables(total, base, data["projection"], (*path, "projection")),
        _table(data["cleavage"], (*path, "cleavage")),
        direction=data.get("direction", "fibration"),
        split=data.get("split", False),
        name=data.get("name", ""),
    )


def _monoidal_fibration(data: dict, path: Where) -> MonoidalFibrationData:
    return MonoidalFibrationData(
        carrier=_fibration(data["carrier"], (*path, "carrier")),
        total_monoidal=_monoidal(data["total_monoidal"], (*path, "total_monoidal")),
        base_monoidal=_monoidal(data["base_monoidal"], (*path, "base_monoidal")),
        name=data.get("name", ""),
    )


def _fibrewise(data: dict, path: Where) -> FibrewiseMonoidal:
    carrier = _indexed(data["carrier"], (*path, "carrier"))
    base = carrier.base
    per_fibre = {}
    for x, body in data["per_fibre"].items():
        where = (*path, "per_fibre", x)
        if x not in carrier.fibre:
            raise ParseError(
                item="unknown-object",
                message=f"{x!r} is not an object of {base.name}",
                field=_where(where),
            )
        per_fibre[x] = _monoidal(body, where, base=carrier.at(x))
    reindex_monoidal = {}
    for f, body in data["reindex_monoidal"].items():
        where = (*path, "reindex_monoidal", f)
        if f not in carrier.reindex:
            raise ParseError(
                item="unknown-morphism",
                message=f"{f!r} is not a morphism of {base.name}",
                field=_where(where),
            )
        reindex_monoidal[f] = MonoidalFunctorFactory.build_entity(
            carrier.fun(f),
            _table(body["laxator"], (*where, "laxator"), width=2),
            body["unit_mor"],
            strength=body.get("strength", "lax"),
        )
    base_monoidal = data.get("base_monoidal")
    return FibrewiseMonoidalFactory.build_entity(
        carrier,
        per_fibre,
        reindex_monoidal,
        tuple(data.get("skipped", ())),
        base_monoidal=(
            None
            if base_monoidal is None
            else _monoidal(base_monoidal, (*path, "base_monoidal"))
        ),
        name=data.get("name", ""),
    )


def _report(data: dict, path: Where) -> LawReport:
    return LawReport(
        subject=data["subject"],
        checked=list(data["checked"]),
        violations=[
            LawViolation(v["law"], tuple(v["witness"]), v["message"])
            for v in data["violations"]
        ],
        notes=list(data.get("notes", ())),
        instances=data.get("instances", 0),
        skipped=dict(data.get("skipped", {})),
    )


DECODERS: Dict[str, Callable[[dict, Where], Any]] = {
    "fincat": _fincat,
    "functor": _functor,
    "nattrans": _nattrans,
    "monoidal": _monoidal,
    "indexed": _indexed,
    "lax_monoidal": _lax_monoidal,
    "fibration": _fibration,
    "monoidal_fibration": _monoidal_fibration,
    "fibrewise": _fibrewise,
    "report": _report,
}


# --------------------------------------------------
# Workspace Model
# --------------------------------------------------


@dataclass
class Workspace:
    """
    Named entities loaded from interchange files.

    Attributes:
    - entities (Dict[str, Any]): Name -> entity, in load order.
    - sources (Dict[str, Path]): Name -> the file it came from.
    """

    entities: Dict[str, Any] = field(default_factory=dict)
    sources: Dict[str, Path] = field(default_factory=dict)

    def add(self, name: str, entity: Any, source: Path) -> None:
        if name in self.entities:
            raise ParseError(
                item="duplicate-name",
                message=f"{name!r} is defined in {self.sources[name]} and {source}",
                field="name",
            )
        self.entities[name] = entity
        self.sources[name] = source


class InterchangeServices:
    """
    YAML interchange of every entity kind.

    Dumps are canonical: keys sorted, table rows in lexicographic order, object lists in
    declaration order. Loading a canonical dump and dumping it again is byte-identical.

    Methods:
    - kind_of(entity) -> str
    - encode(entity) -> dict / decode(data) -> entity
    - dumps(entity) -> str / loads(text) -> entity
    - dump_file(entity, path) / load_file(path) -> entity
    - load_workspace(paths) -> Workspace
    """

    @staticmethod
    def kind_of(entity: Any) -> str:
        try:
            return ENCODERS[type(entity)][0]
        except KeyError:
            raise ShapeMismatch(
                item="unknown-kind",
                message=f"{type(entity).__name__} has no interchange form",
            )

    @classmethod
    def encode(cls, entity: Any) -> dict:
        kind = cls.kind_of(entity)
        return {"kind": kind, **ENCODERS[type(entity)][1](entity)}

    @staticmethod
    def decode(data: Any, text: str = "") -> Any:
        """
        Validates a parsed document against the schema of its kind, then builds it.

        Raises:
        - ParseError: With the dotted field path, and the line when `text` is given.
        """
        kind = data.get("kind") if isinstance(data, dict) else None
        if kind not in KINDS:
            raise ParseError(
                item="unknown-kind",
                message=f"{kind!r} is not one of {KINDS}",
                line=_line_of(text, ["kind"]) if text else None,
                field="kind",
            )
        error = best_match(VALIDATORS[kind].iter_errors(data))
        if error is not None:
            path = list(error.absolute_path)
            raise ParseError(
                item="schema-violation",
                message=error.message,
                line=_line_of(text, path) if text else None,
                field=_where(path) or kind,
            )
        try:
            entity = DECODERS[kind](data, ())
        except ParseError as error:
            if error.line is not None or not text or not error.field:
                raise
            raise ParseError(
                item=error.item,
                message=error.message,
                line=_line_of(text, error.field.split(".")),
                field=error.field,
            )
        log.debug("loaded %s %s", kind, getattr(entity, "name", ""))
        return entity

    @classmethod
    def dumps(cls, entity: Any) -> str:
        return yaml.safe_dump(
            cls.encode(entity),
            sort_keys=True,
            allow_unicode=True,
            default_flow_style=None,
        )

    @classmethod
    def loads(cls, text: str) -> Any:
        """
        Raises:
        - ParseError: On malformed YAML, an unknown kind or a schema violation.
        """
        try:
            data = yaml.safe_load(text)
        except yaml.MarkedYAMLError as error:
            mark = error.problem_mark or error.context_mark
            raise ParseError(
                item="invalid-yaml",
                message=str(error.problem or error),
                line=mark.line + 1 if mark else None,
            )
        except yaml.YAMLError as error:
            raise ParseError(item="invalid-yaml", message=str(error))
        return cls.decode(data, text)

    @classmethod
    def dump_file(cls, entity: Any, path: Path) -> None:
        Path(path).write_text(cls.dumps(entity), encoding="utf-8")

    @classmethod
    def load_file(cls, path: Path) -> Any:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as error:
            raise ParseError(item="unreadable-file", message=f"{path}: {error}")
        return cls.loads(text)

    @classmethod
    def load_workspace(cls, paths: Iterable[Path]) -> Workspace:
        workspace = Workspace()
        for path in map(Path, paths):
            entity = cls.load_file(path)
            name = getattr(entity, "name", "") or getattr(entity, "subject", "")
            workspace.add(name or path.stem, entity, path)
        return workspace

