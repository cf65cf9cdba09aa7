"""Schema and query descriptions consumed by the simulated DBMS.

Queries arrive pre-structured (no SQL parsing); sql_text is carried
opaquely for schematic construction. One JSON file describes a workload:
a schema plus its queries, field names mirroring these types.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from booster.errors import UnknownObject


@dataclass(frozen=True)
class ColumnDef:
    name: str
    distinct_values: int
    width_bytes: int


@dataclass(frozen=True)
class TableDef:
    name: str
    row_count: int
    columns: Tuple[ColumnDef, ...]

    def __post_init__(self):
        if self.row_count < 1:
            raise ValueError(f"table {self.name}: row_count must be >= 1")
        names = [c.name for c in self.columns]
        if len(names) != len(set(names)):
            raise ValueError(f"table {self.name}: duplicate column names")
        for c in self.columns:
            if not (1 <= c.distinct_values <= self.row_count):
                raise ValueError(
                    f"table {self.name}.{c.name}: distinct_values {c.distinct_values} "
                    f"outside [1, {self.row_count}]"
                )

    @property
    def row_width(self) -> int:
        return sum(c.width_bytes for c in self.columns)

    def column(self, name: str) -> ColumnDef:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownObject(f"column {self.name}.{name} does not exist")


@dataclass(frozen=True)
class SchemaDef:
    tables: Tuple[TableDef, ...]

    def __post_init__(self):
        names = [t.name for t in self.tables]
        if len(names) != len(set(names)):
            raise ValueError("duplicate table names in schema")

    def table(self, name: str) -> TableDef:
        for t in self.tables:
            if t.name == name:
                return t
        raise UnknownObject(f"table {name} does not exist")

    def has_table(self, name: str) -> bool:
        return any(t.name == name for t in self.tables)

    def to_json(self) -> dict:
        return {
            "tables": [
                {
                    "name": t.name,
                    "row_count": t.row_count,
                    "columns": [
                        {
                            "name": c.name,
                            "distinct_values": c.distinct_values,
                            "width_bytes": c.width_bytes,
                        }
                        for c in t.columns
                    ],
                }
                for t in self.tables
            ]
        }

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "SchemaDef":
        return cls(
            tables=tuple(
                TableDef(
                    name=t["name"],
                    row_count=t["row_count"],
                    columns=tuple(
                        ColumnDef(c["name"], c["distinct_values"], c["width_bytes"])
                        for c in t["columns"]
                    ),
                )
                for t in d["tables"]
            )
        )


@dataclass(frozen=True)
class Predicate:
    table: str
    column: str
    selectivity: float

    def __post_init__(self):
        if not (0.0 < self.selectivity <= 1.0):
            raise ValueError(f"selectivity {self.selectivity} outside (0, 1]")


@dataclass(frozen=True)
class Join:
    left: Tuple[str, str]
    right: Tuple[str, str]


@dataclass(frozen=True)
class QuerySpec:
    query_id: str
    sql_text: str
    template_id: str
    referenced: Tuple[Tuple[str, str], ...]
    predicates: Tuple[Predicate, ...] = ()
    joins: Tuple[Join, ...] = ()
    order_by: Optional[Tuple[Tuple[str, str], ...]] = None
    cte_blocks: int = 0

    def __post_init__(self):
        if self.cte_blocks < 0:
            raise ValueError("cte_blocks must be >= 0")

    @property
    def tables(self) -> Tuple[str, ...]:
        """Referenced tables in first-appearance order."""
        seen: List[str] = []
        for t, _ in self.referenced:
            if t not in seen:
                seen.append(t)
        for p in self.predicates:
            if p.table not in seen:
                seen.append(p.table)
        for j in self.joins:
            for t in (j.left[0], j.right[0]):
                if t not in seen:
                    seen.append(t)
        return tuple(seen)

    def columns_read(self, table: str) -> frozenset:
        """Every column of `table` the query touches anywhere."""
        cols = {c for t, c in self.referenced if t == table}
        cols |= {p.column for p in self.predicates if p.table == table}
        for j in self.joins:
            for (t, c) in (j.left, j.right):
                if t == table:
                    cols.add(c)
        if self.order_by:
            cols |= {c for t, c in self.order_by if t == table}
        return frozenset(cols)

    def predicates_on(self, table: str) -> Dict[str, float]:
        return {p.column: p.selectivity for p in self.predicates if p.table == table}

    def validate_against(self, schema: SchemaDef) -> None:
        for t in self.tables:
            table = schema.table(t)  # raises UnknownObject
            for c in self.columns_read(t):
                table.column(c)  # raises UnknownObject

    def to_json(self) -> dict:
        out: dict = {
            "query_id": self.query_id,
            "sql_text": self.sql_text,
            "template_id": self.template_id,
            "referenced": [list(r) for r in self.referenced],
            "predicates": [
                {"table": p.table, "column": p.column, "selectivity": p.selectivity}
                for p in self.predicates
            ],
            "joins": [{"left": list(j.left), "right": list(j.right)} for j in self.joins],
            "cte_blocks": self.cte_blocks,
        }
        if self.order_by is not None:
            out["order_by"] = [list(o) for o in self.order_by]
        return out

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "QuerySpec":
        order_by = d.get("order_by")
        return cls(
            query_id=d["query_id"],
            sql_text=d["sql_text"],
            template_id=d["template_id"],
            referenced=tuple((t, c) for t, c in d.get("referenced", ())),
            predicates=tuple(
                Predicate(p["table"], p["column"], p["selectivity"])
                for p in d.get("predicates", ())
            ),
            joins=tuple(
                Join(tuple(j["left"]), tuple(j["right"])) for j in d.get("joins", ())
            ),
            order_by=tuple((t, c) for t, c in order_by) if order_by else None,
            cte_blocks=d.get("cte_blocks", 0),
        )


def load_workload(path: str | Path) -> Tuple[SchemaDef, List[QuerySpec]]:
    """Load a workload file: {"schema": ..., "queries": [...]}."""
    data = json.loads(Path(path).read_text())
    schema = SchemaDef.from_json(data["schema"])
    queries = [QuerySpec.from_json(q) for q in data["queries"]]
    for q in queries:
        q.validate_against(schema)
    return schema, queries


def workload_to_json(schema: SchemaDef, queries: Sequence[QuerySpec]) -> dict:
    return {"schema": schema.to_json(), "queries": [q.to_json() for q in queries]}
