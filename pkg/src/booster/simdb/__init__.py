"""Deterministic simulated DBMS: schema, plans, cost model, execution."""

from booster.simdb.engine import ExecutionResult, SimulatedDbms
from booster.simdb.plan import PlanNode, PlanTree, plan_signature
from booster.simdb.schema import (
    ColumnDef,
    QuerySpec,
    SchemaDef,
    TableDef,
    load_workload,
    workload_to_json,
)

__all__ = [
    "ColumnDef",
    "ExecutionResult",
    "PlanNode",
    "PlanTree",
    "QuerySpec",
    "SchemaDef",
    "SimulatedDbms",
    "TableDef",
    "load_workload",
    "plan_signature",
    "workload_to_json",
]
