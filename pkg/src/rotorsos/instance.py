"""Rotor-model instances and their JSON file format.

An instance file looks like::

    {"k": 2, "a": 1.0, "b": 1.0, "c_pot": 2.0,
     "edges": [[0, 1, 1.0], [1, 2, 0.5]]}

Vertices are 0-based integers.  ``n`` may be given explicitly (to allow
isolated vertices); otherwise it is one more than the largest vertex id.
Edge weights default to 1 when an edge is written as ``[u, v]``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

__all__ = ["RotorInstance", "InstanceError", "parse_instance", "load_instance", "dump_instance"]


class InstanceError(ValueError):
    """Invalid instance data; ``line`` is the 1-based source line when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class RotorInstance:
    """Weighted interaction graph with rotor dimension and Hamiltonian coefficients.

    The Hamiltonian is ``a * sum_v Delta_v + b * sum_(v,w) w_vw (c_pot + x_v . x_w)``.
    """

    k: int
    a: float
    b: float
    edges: tuple = ()
    n: Optional[int] = None
    c_pot: float = 2.0
    min_k: int = field(default=2, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple(_normalize_edge(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        n = self.n
        if n is None:
            n = 1 + max((max(u, v) for u, v, _ in edges), default=0)
        object.__setattr__(self, "n", int(n))
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < self.min_k:
            raise InstanceError(f"k must be an integer >= {self.min_k}, got {self.k!r}")
        for name in ("a", "b", "c_pot"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or isinstance(val, bool) or not math.isfinite(val):
                raise InstanceError(f"{name} must be a finite number, got {val!r}")
        if self.a < 0 or self.b < 0:
            raise InstanceError("a and b must be nonnegative")
        if self.n < 1:
            raise InstanceError("instance needs at least one vertex")
        for u, v, w in self.edges:
            if u == v:
                raise InstanceError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge ({u}, {v}) references a vertex outside 0..{self.n - 1}")
            if not math.isfinite(w):
                raise InstanceError(f"edge ({u}, {v}) has non-finite weight")

    @property
    def has_negative_weights(self) -> bool:
        return any(w < 0 for _, _, w in self.edges)

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def with_k(self, k: int) -> "RotorInstance":
        return RotorInstance(k, self.a, self.b, self.edges, self.n, self.c_pot)

    def relabel(self, perm: Iterable[int]) -> "RotorInstance":
        """Instance with vertex v renamed to perm[v]."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise InstanceError("relabeling must be a permutation of the vertices")
        edges = [(perm[u], perm[v], w) for u, v, w in self.edges]
        return RotorInstance(self.k, self.a, self.b, edges, self.n, self.c_pot)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "a": self.a,
            "b": self.b,
            "c_pot": self.c_pot,
            "n": self.n,
            "edges": [[u, v, w] for u, v, w in self.edges],
        }


def _normalize_edge(e) -> tuple[int, int, float]:
    if len(e) == 2:
        u, v = e
        w = 1.0
    elif len(e) == 3:
        u, v, w = e
    else:
        raise InstanceError(f"edge {e!r} must be [u, v] or [u, v, w]")
    for x in (u, v):
        if not isinstance(x, int) or isinstance(x, bool):
            raise InstanceError(f"edge {e!r}: vertex ids must be integers")
    if not isinstance(w, (int, float)) or isinstance(w, bool):
        raise InstanceError(f"edge {e!r}: weight must be a number")
    return int(u), int(v), float(w)


def _edge_lines(text: str) -> list[int]:
    """1-based line numbers of each edge entry inside the ``edges`` array."""
    m = re.search(r'"edges"\s*:\s*\[', text)
    if not m:
        return []
    lines = []
    depth = 1
    pos = m.end()
    while pos < len(text) and depth > 0:
        ch = text[pos]
        if ch == "[":
            if depth == 1:
                lines.append(text.count("\n", 0, pos) + 1)
            depth += 1
        elif ch == "]":
            depth -= 1
        pos += 1
    return lines


def _key_line(text: str, key: str) -> Optional[int]:
    m = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def parse_instance(text: str) -> RotorInstance:
    """Parse instance JSON text; every error carries a line number where possible."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(data, dict):
        raise InstanceError("top level must be an object", 1)
    allowed = {"k", "a", "b", "c_pot", "edges", "n"}
    for key in data:
        if key not in allowed:
            raise InstanceError(f"unknown field {key!r}", _key_line(text, key))
    for key in ("k", "a", "b", "edges"):
        if key not in data:
            raise InstanceError(f"missing required field {key!r}", 1)
    if not isinstance(data["edges"], list):
        raise InstanceError("'edges' must be a list", _key_line(text, "edges"))
    edge_lines = _edge_lines(text)
    edges = []
    for idx, e in enumerate(data["edges"]):
        line = edge_lines[idx] if idx < len(edge_lines) else _key_line(text, "edges")
        if not isinstance(e, list):
            raise InstanceError(f"edge #{idx} must be a list", line)
        try:
            edges.append(_normalize_edge(e))
        except InstanceError as exc:
            raise InstanceError(f"edge #{idx}: {exc}", line) from None
        u, v, _ = edges[-1]
        if u == v:
            raise InstanceError(f"edge #{idx} is a self-loop at vertex {u}", line)
        if u < 0 or v < 0:
            raise InstanceError(f"edge #{idx} has a negative vertex id", line)
        if "n" in data and isinstance(data["n"], int) and max(u, v) >= data["n"]:
            raise InstanceError(f"edge #{idx} references vertex {max(u, v)} but n={data['n']}", line)
    try:
        return RotorInstance(
            k=data["k"],
            a=data["a"],
            b=data["b"],
            edges=tuple(edges),
            n=data.get("n"),
            c_pot=data.get("c_pot", 2.0),
        )
    except InstanceError as exc:
        first = str(exc).split()[0]
        line = _key_line(text, first) if first in {"k", "a", "b", "c_pot", "n"} else 1
        raise InstanceError(str(exc), line) from None


def load_instance(path: str) -> RotorInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def dump_instance(inst: RotorInstance) -> str:
    d = inst.to_dict()
    edges = d.pop("edges")
    head = ", ".join(f'"{key}": {json.dumps(d[key])}' for key in ("k", "a", "b", "c_pot", "n"))
    body = ",\n".join(f"    {json.dumps(e)}" for e in edges)
    return "{" + head + ',\n  "edges": [\n' + body + "\n  ]\n}\n"
