"""Operator trees produced by the simulated planner."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Optional, Tuple

OPERATORS = (
    "SeqScan",
    "IndexScan",
    "BitmapScan",
    "NestLoopJoin",
    "HashJoin",
    "MergeJoin",
    "Sort",
    "Aggregate",
    "CTEScan",
    "Materialize",
)

SCAN_OPERATORS = ("SeqScan", "IndexScan", "BitmapScan")
JOIN_OPERATORS = ("NestLoopJoin", "HashJoin", "MergeJoin")


@dataclass(frozen=True)
class PlanNode:
    operator: str
    relation: Optional[str] = None
    index: Optional[str] = None
    est_cost: float = 0.0
    est_rows: float = 0.0
    children: Tuple["PlanNode", ...] = ()

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator!r}")
        if self.est_cost < 0 or self.est_rows < 0:
            raise ValueError("negative cost or row estimate")
        if self.operator in SCAN_OPERATORS and self.children:
            raise ValueError(f"{self.operator} must be a leaf")
        if self.operator in JOIN_OPERATORS and len(self.children) != 2:
            raise ValueError(f"{self.operator} needs exactly two children")
        child_cost = sum(c.est_cost for c in self.children)
        # small epsilon for float accumulation
        if self.est_cost + 1e-9 < child_cost:
            raise ValueError("node cost below sum of children")

    def walk(self) -> Iterator["PlanNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    @property
    def incremental_cost(self) -> float:
        return max(0.0, self.est_cost - sum(c.est_cost for c in self.children))


def plan_signature(node: PlanNode) -> str:
    """Canonical identity of a plan's shape.

    Pre-order (operator, relation, index) per node; children ordered by
    their own signatures; costs and row estimates excluded.
    """
    parts = [x for x in (node.relation, node.index) if x]
    parts += sorted(plan_signature(c) for c in node.children)
    return f"{node.operator}({','.join(parts)})"


@dataclass(frozen=True)
class PlanTree:
    """A chosen plan plus planner-level cost bookkeeping.

    `cost` is the cost model's value for the tree. `distorted_cost` is
    what a cost-based consumer would see: it carries a surcharge when
    query hints forced the planner away from its unconstrained choice,
    mirroring real optimizers whose hint penalties inflate reported cost
    without changing the work performed.
    """

    root: PlanNode
    distortion: float = 0.0

    @property
    def cost(self) -> float:
        return self.root.est_cost

    @property
    def distorted_cost(self) -> float:
        return self.root.est_cost + self.distortion

    @property
    def signature(self) -> str:
        return plan_signature(self.root)

    @property
    def indexes_used(self) -> frozenset:
        return frozenset(n.index for n in self.root.walk() if n.index)

    @property
    def operators(self) -> frozenset:
        return frozenset(n.operator for n in self.root.walk())

    def to_json(self) -> dict:
        def enc(n: PlanNode) -> dict:
            out: dict = {
                "operator": n.operator,
                "est_cost": n.est_cost,
                "est_rows": n.est_rows,
            }
            if n.relation:
                out["relation"] = n.relation
            if n.index:
                out["index"] = n.index
            if n.children:
                out["children"] = [enc(c) for c in n.children]
            return out

        return {"root": enc(self.root), "distortion": self.distortion}

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "PlanTree":
        def dec(nd: Mapping[str, Any]) -> PlanNode:
            return PlanNode(
                operator=nd["operator"],
                relation=nd.get("relation"),
                index=nd.get("index"),
                est_cost=nd["est_cost"],
                est_rows=nd["est_rows"],
                children=tuple(dec(c) for c in nd.get("children", ())),
            )

        return cls(root=dec(d["root"]), distortion=d.get("distortion", 0.0))


def render_plan(node: PlanNode, depth: int = 0) -> str:
    """Indented text rendering (used by schematics and the CLI)."""
    label = node.operator
    if node.relation:
        label += f" rel={node.relation}"
    if node.index:
        label += f" index={node.index}"
    lines = ["  " * depth + label]
    for c in node.children:
        lines.append(render_plan(c, depth + 1))
    return "\n".join(lines)
