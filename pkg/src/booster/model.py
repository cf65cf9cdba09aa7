"""Canonical configuration model: knobs, indexes, per-query options, seeds.

Every other module trades in these value types. Knob names are open
(string-keyed) so artifacts from different tuners normalize into one
namespace; KNOB_SPECS plus KNOB_ALIASES form the bundled dictionary of
tunables the simulator understands.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

OPTIMIZER_FLAGS = (
    "enable_sort",
    "enable_hashjoin",
    "enable_mergejoin",
    "enable_nestloop",
    "enable_seqscan",
    "enable_indexscan",
    "enable_bitmapscan",
    "enable_material",
)

ACCESS_METHODS = ("Seq", "Index", "Bitmap", "Any")
CTE_MODES = ("Inline", "Materialize", "Default")
JOIN_OPERATORS = ("NestLoopJoin", "HashJoin", "MergeJoin")

# Seed provenance, in sanitizer dedup preference order (earlier wins ties).
PROVENANCE_ORDER = ("LLM", "Filled", "Reference", "IndexAugmented", "Permuted")


@dataclass(frozen=True)
class KnobSpec:
    """Static description of a system knob the simulator honors."""

    name: str
    kind: str  # "int" | "float" | "bool" | "enum"
    default: Any
    bounds: Optional[Tuple[Any, Any]] = None
    domain: Optional[Tuple[Any, ...]] = None


KNOB_SPECS: Dict[str, KnobSpec] = {
    "max_parallel_workers": KnobSpec("max_parallel_workers", "int", 2, bounds=(1, 32)),
    "work_mem_kb": KnobSpec("work_mem_kb", "int", 4096, bounds=(64, 4_194_304)),
    "random_page_cost": KnobSpec("random_page_cost", "float", 4.0, bounds=(1.0, 10.0)),
}

# Aliases seen in third-party tuner artifacts, mapped to canonical names.
KNOB_ALIASES: Dict[str, str] = {
    "max_parallel_workers_per_gather": "max_parallel_workers",
    "parallel_workers": "max_parallel_workers",
    "workers": "max_parallel_workers",
    "work_mem": "work_mem_kb",
    "sort_mem": "work_mem_kb",
    "random_page_cost": "random_page_cost",
    "rand_page_cost": "random_page_cost",
}


def canonical_knob_name(name: str) -> Optional[str]:
    """Map an artifact knob name into the canonical namespace, or None."""
    if name in KNOB_SPECS:
        return name
    return KNOB_ALIASES.get(name)


@dataclass(frozen=True)
class Knob:
    """One knob setting. Value must sit within bounds/domain when present."""

    name: str
    value: Any
    scope: str = "system"  # "system" | "query"
    bounds: Optional[Tuple[Any, Any]] = None
    domain: Optional[Tuple[Any, ...]] = None

    def __post_init__(self):
        if self.bounds is not None:
            lo, hi = self.bounds
            if not (lo <= self.value <= hi):
                raise ValueError(f"knob {self.name}={self.value!r} outside bounds {self.bounds}")
        if self.domain is not None and self.value not in self.domain:
            raise ValueError(f"knob {self.name}={self.value!r} not in domain {self.domain}")


def coerce_knob(name: str, value: Any) -> Optional[Knob]:
    """Coerce (name, value) into a valid canonical Knob.

    Unknown names return None. Out-of-bounds values are clamped; values
    of the wrong type are converted when possible, else dropped (None).
    """
    canon = canonical_knob_name(name)
    if canon is None:
        return None
    spec = KNOB_SPECS[canon]
    try:
        if spec.kind == "int":
            value = int(round(float(value)))
        elif spec.kind == "float":
            value = float(value)
        elif spec.kind == "bool":
            value = bool(value)
    except (TypeError, ValueError):
        return None
    if spec.bounds is not None:
        lo, hi = spec.bounds
        value = min(max(value, lo), hi)
    if spec.domain is not None and value not in spec.domain:
        return None
    return Knob(canon, value, scope="system", bounds=spec.bounds, domain=spec.domain)


def default_system_knobs() -> Dict[str, Knob]:
    """Stock knob settings (every spec default)."""
    return {
        name: Knob(name, spec.default, bounds=spec.bounds, domain=spec.domain)
        for name, spec in KNOB_SPECS.items()
    }


def knob_value(knobs: Mapping[str, Knob], name: str) -> Any:
    """Knob value with fall-through to the spec default."""
    k = knobs.get(name)
    if k is not None:
        return k.value
    return KNOB_SPECS[name].default


_INDEX_ID_RE = re.compile(
    r"^(?P<table>\w+)\((?P<keys>[^)]*)\)"
    r"(?:INCLUDE\((?P<includes>[^)]*)\))?"
    r"(?:FF=(?P<ff>\d+))?$"
)


@dataclass(frozen=True)
class IndexDef:
    """A (possibly covering) index definition, identified canonically."""

    table: str
    key_columns: Tuple[str, ...]
    include_columns: Tuple[str, ...] = ()
    fillfactor: Optional[int] = None

    def __post_init__(self):
        if not self.key_columns:
            raise ValueError("index needs at least one key column")
        if set(self.key_columns) & set(self.include_columns):
            raise ValueError("key and include columns must be disjoint")
        if self.fillfactor is not None and not (10 <= self.fillfactor <= 100):
            raise ValueError(f"fillfactor {self.fillfactor} outside [10,100]")

    @property
    def index_id(self) -> str:
        parts = [f"{self.table}({','.join(self.key_columns)})"]
        if self.include_columns:
            parts.append(f"INCLUDE({','.join(self.include_columns)})")
        if self.fillfactor is not None:
            parts.append(f"FF={self.fillfactor}")
        return "".join(parts)

    @property
    def all_columns(self) -> FrozenSet[str]:
        return frozenset(self.key_columns) | frozenset(self.include_columns)

    def to_json(self) -> dict:
        out: dict = {"table": self.table, "key_columns": list(self.key_columns)}
        if self.include_columns:
            out["include_columns"] = list(self.include_columns)
        if self.fillfactor is not None:
            out["fillfactor"] = self.fillfactor
        return out

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "IndexDef":
        return cls(
            table=d["table"],
            key_columns=tuple(d["key_columns"]),
            include_columns=tuple(d.get("include_columns", ())),
            fillfactor=d.get("fillfactor"),
        )


def parse_index_id(index_id: str) -> IndexDef:
    """Inverse of IndexDef.index_id (round-trip identity on valid defs)."""
    m = _INDEX_ID_RE.match(index_id)
    if m is None:
        raise ValueError(f"unparseable index id: {index_id!r}")
    keys = tuple(c for c in m.group("keys").split(",") if c)
    includes = tuple(c for c in (m.group("includes") or "").split(",") if c)
    ff = m.group("ff")
    return IndexDef(m.group("table"), keys, includes, int(ff) if ff else None)


def canonical_index_id(index: IndexDef) -> str:
    """Stable, order-sensitive encoding; equal defs iff equal ids."""
    return index.index_id


def covers(candidate: IndexDef, original: IndexDef) -> bool:
    """True iff candidate can serve every lookup the original serves.

    Requires same table, the original's key columns as a prefix of the
    candidate's, and all original columns present somewhere in the
    candidate (key or include).
    """
    if candidate.table != original.table:
        return False
    if len(candidate.key_columns) < len(original.key_columns):
        return False
    if candidate.key_columns[: len(original.key_columns)] != original.key_columns:
        return False
    return original.all_columns <= candidate.all_columns


@dataclass(frozen=True)
class JoinDirective:
    """Forces the join operator for the node combining exactly `tables`."""

    tables: FrozenSet[str]
    join_type: str

    def __post_init__(self):
        if self.join_type not in JOIN_OPERATORS:
            raise ValueError(f"unknown join type {self.join_type!r}")

    def to_json(self) -> dict:
        return {"tables": sorted(self.tables), "join_type": self.join_type}

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "JoinDirective":
        return cls(frozenset(d["tables"]), d["join_type"])


@dataclass(frozen=True)
class QueryOptions:
    """Per-query planner directives (query knobs / hints).

    optimizer_flags stores only deviations from the all-enabled default.
    hidden_indexes masks indexes from this query's planner without
    removing them from the holistic configuration.
    """

    query_id: str
    optimizer_flags: Mapping[str, bool] = field(default_factory=dict)
    table_access: Mapping[str, str] = field(default_factory=dict)
    join_directives: Tuple[JoinDirective, ...] = ()
    cte_mode: str = "Default"
    hidden_indexes: FrozenSet[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "optimizer_flags", dict(self.optimizer_flags))
        object.__setattr__(self, "table_access", dict(self.table_access))
        for f in self.optimizer_flags:
            if f not in OPTIMIZER_FLAGS:
                raise ValueError(f"unknown optimizer flag {f!r}")
        for t, m in self.table_access.items():
            if m not in ACCESS_METHODS:
                raise ValueError(f"unknown access method {m!r} for table {t!r}")
        if self.cte_mode not in CTE_MODES:
            raise ValueError(f"unknown cte mode {self.cte_mode!r}")

    def flag(self, name: str) -> bool:
        return self.optimizer_flags.get(name, True)

    def access(self, table: str) -> str:
        return self.table_access.get(table, "Any")

    def normalized(self) -> "QueryOptions":
        """Drop entries equal to defaults so equal behavior means equal value."""
        flags = {k: v for k, v in sorted(self.optimizer_flags.items()) if v is False}
        access = {k: v for k, v in sorted(self.table_access.items()) if v != "Any"}
        return QueryOptions(
            query_id=self.query_id,
            optimizer_flags=flags,
            table_access=access,
            join_directives=tuple(sorted(self.join_directives, key=lambda d: (sorted(d.tables), d.join_type))),
            cte_mode=self.cte_mode,
            hidden_indexes=frozenset(self.hidden_indexes),
        )

    def to_json(self) -> dict:
        n = self.normalized()
        out: dict = {"query_id": n.query_id}
        if n.optimizer_flags:
            out["optimizer_flags"] = dict(n.optimizer_flags)
        if n.table_access:
            out["table_access"] = dict(n.table_access)
        if n.join_directives:
            out["join_directives"] = [d.to_json() for d in n.join_directives]
        if n.cte_mode != "Default":
            out["cte_mode"] = n.cte_mode
        if n.hidden_indexes:
            out["hidden_indexes"] = sorted(n.hidden_indexes)
        return out

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "QueryOptions":
        return cls(
            query_id=d["query_id"],
            optimizer_flags=d.get("optimizer_flags", {}),
            table_access=d.get("table_access", {}),
            join_directives=tuple(JoinDirective.from_json(j) for j in d.get("join_directives", ())),
            cte_mode=d.get("cte_mode", "Default"),
            hidden_indexes=frozenset(d.get("hidden_indexes", ())),
        )


def default_options(query_id: str) -> QueryOptions:
    return QueryOptions(query_id=query_id)


@dataclass(frozen=True)
class Configuration:
    """A holistic DBMS setting: system knobs, indexes, per-query options."""

    system_knobs: Mapping[str, Knob] = field(default_factory=dict)
    indexes: FrozenSet[IndexDef] = frozenset()
    query_options: Mapping[str, QueryOptions] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "system_knobs", dict(self.system_knobs))
        object.__setattr__(self, "indexes", frozenset(self.indexes))
        object.__setattr__(self, "query_options", dict(self.query_options))
        for name, k in self.system_knobs.items():
            if k.scope != "system":
                raise ValueError(f"knob {name} has scope {k.scope!r}, expected system")
        # Deduplicate by canonical id (set semantics already do, but two
        # defs can only collide if equal, so this is a no-op guard).
        ids = {ix.index_id for ix in self.indexes}
        if len(ids) != len(self.indexes):
            raise ValueError("indexes not deduplicated by index_id")

    def knob(self, name: str) -> Any:
        return knob_value(self.system_knobs, name)

    def options_for(self, query_id: str) -> QueryOptions:
        return self.query_options.get(query_id, default_options(query_id))

    def index_by_id(self, index_id: str) -> Optional[IndexDef]:
        for ix in self.indexes:
            if ix.index_id == index_id:
                return ix
        return None

    def to_json(self) -> dict:
        return {
            "system_knobs": {n: k.value for n, k in sorted(self.system_knobs.items())},
            "indexes": [ix.to_json() for ix in sorted(self.indexes, key=lambda i: i.index_id)],
            "query_options": {
                q: o.to_json() for q, o in sorted(self.query_options.items())
            },
        }

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "Configuration":
        knobs = {}
        for name, value in d.get("system_knobs", {}).items():
            k = coerce_knob(name, value)
            if k is not None:
                knobs[k.name] = k
        return cls(
            system_knobs=knobs,
            indexes=frozenset(IndexDef.from_json(i) for i in d.get("indexes", ())),
            query_options={
                q: QueryOptions.from_json(o) for q, o in d.get("query_options", {}).items()
            },
        )

    def digest(self) -> str:
        return stable_digest(self.to_json())


def strip_query_options(config: Configuration) -> Configuration:
    """Query-agnostic projection: system knobs and indexes only."""
    return Configuration(system_knobs=config.system_knobs, indexes=config.indexes)


@dataclass
class Seed:
    """A per-query candidate configuration fragment."""

    query_id: str
    system_knob_suggestions: Dict[str, Knob] = field(default_factory=dict)
    indexes: FrozenSet[IndexDef] = frozenset()
    options: QueryOptions = None  # type: ignore[assignment]
    est_runtime: Optional[float] = None
    provenance: str = "Reference"
    source_qconfig_ids: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.options is None:
            self.options = default_options(self.query_id)
        if self.options.query_id != self.query_id:
            raise ValueError("options.query_id must match seed query_id")
        if self.provenance not in PROVENANCE_ORDER:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        self.indexes = frozenset(self.indexes)

    def provenance_rank(self) -> int:
        return PROVENANCE_ORDER.index(self.provenance)

    def to_json(self) -> dict:
        return {
            "query_id": self.query_id,
            "system_knobs": {n: k.value for n, k in sorted(self.system_knob_suggestions.items())},
            "indexes": [ix.to_json() for ix in sorted(self.indexes, key=lambda i: i.index_id)],
            "options": self.options.to_json(),
            "est_runtime": self.est_runtime,
            "provenance": self.provenance,
            "source_qconfig_ids": list(self.source_qconfig_ids),
        }

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "Seed":
        knobs = {}
        for name, value in d.get("system_knobs", {}).items():
            k = coerce_knob(name, value)
            if k is not None:
                knobs[k.name] = k
        return cls(
            query_id=d["query_id"],
            system_knob_suggestions=knobs,
            indexes=frozenset(IndexDef.from_json(i) for i in d.get("indexes", ())),
            options=QueryOptions.from_json(d["options"]),
            est_runtime=d.get("est_runtime"),
            provenance=d.get("provenance", "Reference"),
            source_qconfig_ids=list(d.get("source_qconfig_ids", ())),
        )

    def digest(self) -> str:
        return stable_digest(self.to_json())


def lower_median(values: Iterable[Any]) -> Any:
    """Median with the lower element chosen for even-sized inputs."""
    ordered = sorted(values)
    if not ordered:
        raise ValueError("median of empty set")
    return ordered[(len(ordered) - 1) // 2]


def stable_digest(obj: Any) -> str:
    """Short deterministic digest of a JSON-serializable object."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def merge_indexes(sets: Iterable[Iterable[IndexDef]]) -> FrozenSet[IndexDef]:
    """Union of index sets, deduplicated by canonical id."""
    by_id: Dict[str, IndexDef] = {}
    for s in sets:
        for ix in s:
            by_id.setdefault(ix.index_id, ix)
    return frozenset(by_id.values())


__all__ = [
    "ACCESS_METHODS",
    "CTE_MODES",
    "Configuration",
    "IndexDef",
    "JOIN_OPERATORS",
    "JoinDirective",
    "KNOB_ALIASES",
    "KNOB_SPECS",
    "Knob",
    "KnobSpec",
    "OPTIMIZER_FLAGS",
    "PROVENANCE_ORDER",
    "QueryOptions",
    "Seed",
    "canonical_index_id",
    "canonical_knob_name",
    "coerce_knob",
    "covers",
    "default_options",
    "default_system_knobs",
    "knob_value",
    "lower_median",
    "merge_indexes",
    "parse_index_id",
    "stable_digest",
    "strip_query_options",
]
