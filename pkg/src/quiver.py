"""Quiver data model, JSON input, doubling and the flatness criterion."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .models import CheckReport

logger = logging.getLogger(__name__)

ADJOINT_SUFFIX = "*"


class QuiverParseError(ValueError):
    """Invalid quiver input, with the location of the problem."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class Vertex:
    id: str
    dim: int


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str

    @property
    def is_loop(self) -> bool:
        return self.src == self.tgt

    def reversed(self, new_id: str) -> Edge:
        return Edge(new_id, self.tgt, self.src)


@dataclass(frozen=True)
class Quiver:
    """Vertices with dimensions and ordered edges.

    Array order fixes both orderings; the edge order is the global order
    every relation set depends on.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    name: str | None = None
    _vertex_index: dict[str, int] = field(init=False, repr=False, compare=False)
    _edge_index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_vertex_index", {v.id: i for i, v in enumerate(self.vertices)})
        object.__setattr__(self, "_edge_index", {e.id: i for i, e in enumerate(self.edges)})

    def vertex(self, vertex_id: str) -> Vertex:
        return self.vertices[self._vertex_index[vertex_id]]

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self._edge_index[edge_id]]

    def dim(self, vertex_id: str) -> int:
        return self.vertex(vertex_id).dim

    def vertex_index(self, vertex_id: str) -> int:
        return self._vertex_index[vertex_id]

    def edge_index(self, edge_id: str) -> int:
        return self._edge_index[edge_id]

    @property
    def vertex_ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    @property
    def dims(self) -> dict[str, int]:
        return {v.id: v.dim for v in self.vertices}

    def incident_edges(self, vertex_id: str) -> list[Edge]:
        """Edges touching the vertex, in edge order."""
        return [e for e in self.edges if vertex_id in (e.src, e.tgt)]

    def has_loop_at(self, vertex_id: str) -> bool:
        return any(e.is_loop and e.src == vertex_id for e in self.edges)

    def with_dims(self, dims: Mapping[str, int]) -> Quiver:
        vertices = tuple(Vertex(v.id, dims.get(v.id, v.dim)) for v in self.vertices)
        return Quiver(vertices, self.edges, self.name)

    def restrict(self, edge_ids: Iterable[str]) -> Quiver:
        """The subquiver of the given edges and the vertices they touch."""
        keep = set(edge_ids)
        edges = tuple(e for e in self.edges if e.id in keep)
        touched = {v for e in edges for v in (e.src, e.tgt)}
        vertices = tuple(v for v in self.vertices if v.id in touched)
        return Quiver(vertices, edges, self.name)

    def rename_edges(self, mapping: Mapping[str, str]) -> Quiver:
        edges = tuple(Edge(mapping.get(e.id, e.id), e.src, e.tgt) for e in self.edges)
        return Quiver(self.vertices, edges, self.name)

    def to_dict(self) -> dict:
        data: dict = {
            "vertices": [{"id": v.id, "dim": v.dim} for v in self.vertices],
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in self.edges],
        }
        if self.name:
            data = {"name": self.name, **data}
        return data


@dataclass(frozen=True)
class DoubledQuiver:
    """A quiver together with one adjoint edge per base edge.

    Adjoint edges are appended after the base edges, in base order.
    """

    base: Quiver
    edges: tuple[Edge, ...]
    adjoint_of: Mapping[str, str]

    def adjoint(self, edge_id: str) -> str:
        return self.adjoint_of[edge_id]

    def is_adjoint(self, edge_id: str) -> bool:
        return edge_id not in {e.id for e in self.base.edges}

    def edge(self, edge_id: str) -> Edge:
        return next(e for e in self.edges if e.id == edge_id)

    def forget(self) -> Quiver:
        """The doubled quiver as a plain quiver."""
        return Quiver(self.base.vertices, self.edges, self.base.name)


@dataclass(frozen=True)
class RootVector:
    """Nonnegative integer vector indexed by vertex ids."""

    items: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, components: Mapping[str, int]) -> RootVector:
        return cls(tuple(components.items()))

    @property
    def components(self) -> dict[str, int]:
        return dict(self.items)

    def __getitem__(self, vertex_id: str) -> int:
        return self.components[vertex_id]

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.items)

    def support(self) -> list[str]:
        return [k for k, v in self.items if v]

    def __add__(self, other: RootVector) -> RootVector:
        b = other.components
        return RootVector(tuple((k, v + b.get(k, 0)) for k, v in self.items))

    def __sub__(self, other: RootVector) -> RootVector:
        b = other.components
        return RootVector(tuple((k, v - b.get(k, 0)) for k, v in self.items))

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for _, v in self.items) + ")"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _require(obj: dict, key: str, kind: type, location: str):
    if key not in obj:
        raise QuiverParseError(f"missing key {key!r}", location)
    value = obj[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise QuiverParseError(f"{key!r} must be of type {kind.__name__}", f"{location}.{key}")
    return value


def parse_quiver(text: bytes | str) -> Quiver:
    """Parse and validate the quiver JSON format.

    Args:
        text: UTF-8 JSON such as
            ``{"vertices": [{"id": "u", "dim": 1}], "edges": [{"id": "e", "src": "u", "tgt": "u"}]}``

    Returns:
        The validated Quiver, with array order as vertex and edge order.

    Raises:
        QuiverParseError: On malformed JSON, unknown vertex references,
            nonpositive dimensions or duplicate ids.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise QuiverParseError(f"input is not UTF-8: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuiverParseError(f"malformed JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(data, dict):
        raise QuiverParseError("top level must be an object")

    raw_vertices = data.get("vertices")
    if not isinstance(raw_vertices, list) or not raw_vertices:
        raise QuiverParseError("'vertices' must be a nonempty array", "vertices")
    vertices: list[Vertex] = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_vertices):
        loc = f"vertices[{i}]"
        if not isinstance(raw, dict):
            raise QuiverParseError("vertex must be an object", loc)
        vid = _require(raw, "id", str, loc)
        dim = _require(raw, "dim", int, loc)
        if dim <= 0:
            raise QuiverParseError(f"nonpositive dimension {dim}", f"{loc}.dim")
        if vid in seen:
            raise QuiverParseError(f"duplicate vertex id {vid!r}", f"{loc}.id")
        seen.add(vid)
        vertices.append(Vertex(vid, dim))

    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise QuiverParseError("'edges' must be an array", "edges")
    edges: list[Edge] = []
    edge_ids: set[str] = set()
    for i, raw in enumerate(raw_edges):
        loc = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise QuiverParseError("edge must be an object", loc)
        eid = _require(raw, "id", str, loc)
        src = _require(raw, "src", str, loc)
        tgt = _require(raw, "tgt", str, loc)
        for key, ref in (("src", src), ("tgt", tgt)):
            if ref not in seen:
                raise QuiverParseError(f"unknown vertex {ref!r}", f"{loc}.{key}")
        if eid in edge_ids:
            raise QuiverParseError(f"duplicate edge id {eid!r}", f"{loc}.id")
        edge_ids.add(eid)
        edges.append(Edge(eid, src, tgt))

    name = data.get("name")
    quiver = Quiver(tuple(vertices), tuple(edges), name if isinstance(name, str) else None)
    logger.debug("parsed quiver with %d vertices and %d edges", len(vertices), len(edges))
    return quiver


def load_quiver(path: str | Path) -> Quiver:
    """Read and parse a quiver file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Quiver file not found: {path}")
    return parse_quiver(path.read_bytes())


def double_quiver(q: Quiver) -> DoubledQuiver:
    """Append one reversed adjoint edge per base edge."""
    taken = {e.id for e in q.edges}
    adjoint_of: dict[str, str] = {}
    adjoints = []
    for e in q.edges:
        new_id = e.id + ADJOINT_SUFFIX
        while new_id in taken:
            new_id += ADJOINT_SUFFIX
        taken.add(new_id)
        adjoints.append(e.reversed(new_id))
        adjoint_of[e.id] = new_id
        adjoint_of[new_id] = e.id
    return DoubledQuiver(q, q.edges + tuple(adjoints), adjoint_of)


# ---------------------------------------------------------------------------
# Root system and flatness
# ---------------------------------------------------------------------------


def _vector(q: Quiver, d: RootVector | Mapping[str, int]) -> dict[str, int]:
    comps = d.components if isinstance(d, RootVector) else dict(d)
    for vid in q.vertex_ids:
        if vid not in comps:
            raise ValueError(f"missing component for vertex {vid!r}")
    return comps


def tits_form(q: Quiver, a: RootVector | Mapping[str, int], b: RootVector | Mapping[str, int]) -> int:
    """Symmetrized Euler form (a, b)."""
    a, b = _vector(q, a), _vector(q, b)
    value = 2 * sum(a[v] * b[v] for v in q.vertex_ids)
    for e in q.edges:
        value -= a[e.src] * b[e.tgt] + a[e.tgt] * b[e.src]
    return value


def p_value(q: Quiver, d: RootVector | Mapping[str, int]) -> int:
    """p(d) = 1 + sum_e d_src d_tgt - sum_v d_v^2."""
    d = _vector(q, d)
    return 1 + sum(d[e.src] * d[e.tgt] for e in q.edges) - sum(d[v] ** 2 for v in q.vertex_ids)


def reflect(q: Quiver, r: RootVector, vertex_id: str) -> RootVector:
    """Simple reflection at a loop-free vertex."""
    if q.has_loop_at(vertex_id):
        raise ValueError(f"vertex {vertex_id!r} carries a loop and has no simple reflection")
    unit = RootVector(tuple((v, int(v == vertex_id)) for v in q.vertex_ids))
    pairing = tits_form(q, r, unit)
    comps = r.components
    comps[vertex_id] -= pairing
    return RootVector(tuple((v, comps[v]) for v in q.vertex_ids))


def _connected(q: Quiver, support: list[str]) -> bool:
    if not support:
        return False
    chosen = set(support)
    reached = {support[0]}
    frontier = [support[0]]
    while frontier:
        v = frontier.pop()
        for e in q.incident_edges(v):
            for w in (e.src, e.tgt):
                if w in chosen and w not in reached:
                    reached.add(w)
                    frontier.append(w)
    return reached == chosen


def is_positive_root(q: Quiver, r: RootVector | Mapping[str, int]) -> bool:
    """Decide whether r is a positive root of the quiver's root system.

    Vertices carrying loops admit no simple reflection; their unit vectors
    are imaginary simple roots. The vector is reflected at loop-free
    vertices with positive pairing until it becomes negative somewhere
    (not a root), a simple root, or lands in the fundamental region, where
    connected support decides.
    """
    comps = _vector(q, r)
    if all(v == 0 for v in comps.values()):
        raise ValueError("the zero vector is not a root candidate")
    current = RootVector(tuple((v, comps[v]) for v in q.vertex_ids))
    while True:
        values = current.components
        if any(x < 0 for x in values.values()):
            return False
        support = current.support()
        if len(support) == 1 and values[support[0]] == 1:
            return True
        for vid in support:
            if q.has_loop_at(vid):
                continue
            unit = {v: int(v == vid) for v in q.vertex_ids}
            if tits_form(q, current, unit) > 0:
                current = reflect(q, current, vid)
                break
        else:
            return _connected(q, support)


def _boxes(bound: dict[str, int], order: list[str]) -> Iterator[RootVector]:
    def rec(i: int, acc: list[tuple[str, int]]):
        if i == len(order):
            yield RootVector(tuple(acc))
            return
        for x in range(bound[order[i]] + 1):
            yield from rec(i + 1, acc + [(order[i], x)])

    yield from rec(0, [])


def positive_roots_below(q: Quiver, d: RootVector | Mapping[str, int]) -> list[RootVector]:
    """All positive roots r with 0 < r <= d componentwise."""
    bound = _vector(q, d)
    return [r for r in _boxes(bound, q.vertex_ids) if not r.is_zero() and is_positive_root(q, r)]


def decompositions(d: RootVector, roots: list[RootVector]) -> Iterator[list[RootVector]]:
    """Multisets of roots summing to d, each listed in roots order."""

    def rec(remaining: RootVector, start: int, acc: list[RootVector]):
        if remaining.is_zero():
            yield list(acc)
            return
        for i in range(start, len(roots)):
            rest = remaining - roots[i]
            if all(x >= 0 for _, x in rest.items):
                acc.append(roots[i])
                yield from rec(rest, i, acc)
                acc.pop()

    yield from rec(d, 0, [])


def weight_pairing(lam: Mapping[str, int], r: RootVector) -> int:
    return sum(lam.get(v, 0) * x for v, x in r.items)


def flatness_report(
    q: Quiver,
    d: RootVector | Mapping[str, int] | None = None,
    bound: int = 6,
    lam: Mapping[str, int] | None = None,
) -> CheckReport:
    """Check p(d) >= sum p(r_i) over all decompositions into positive roots.

    The report passes when the (non-strict) inequality holds for every
    decomposition; ``parameters["strict"]`` records whether it holds
    strictly for every nontrivial one.

    With a weight vector ``lam`` only roots orthogonal to it take part,
    which is the criterion for the fibre of the moment map over a generic
    character rather than over zero. ``lam . d`` must vanish.
    """
    comps = _vector(q, d if d is not None else q.dims)
    target = RootVector(tuple((v, comps[v]) for v in q.vertex_ids))
    params = {"quiver": q.name, "dims": target.components, "bound": bound}
    if lam is not None:
        unknown = set(lam) - set(q.vertex_ids)
        if unknown:
            raise ValueError(f"weights for unknown vertices: {', '.join(sorted(unknown))}")
        if weight_pairing(lam, target) != 0:
            raise ValueError(f"weight vector is not orthogonal to d = {target}")
        params["lambda"] = {v: lam.get(v, 0) for v in q.vertex_ids}
    if max(comps.values()) > bound:
        return CheckReport.inconclusive(
            "flatness", params, f"component exceeds enumeration bound {bound}", bound=bound
        )

    p_d = p_value(q, target)
    roots = positive_roots_below(q, target)
    if lam is not None:
        roots = [r for r in roots if weight_pairing(lam, r) == 0]
    violations, ties = [], []
    count = 0
    for parts in decompositions(target, roots):
        if len(parts) < 2:
            continue
        count += 1
        total = sum(p_value(q, r) for r in parts)
        entry = {"parts": [str(r) for r in parts], "sum_p": total}
        if total > p_d:
            violations.append(entry)
        elif total == p_d:
            ties.append(entry)
    params.update({
        "p_value": p_d,
        "positive_roots": len(roots),
        "decompositions_checked": count,
        "strict": not violations and not ties,
    })
    logger.debug("flatness: p=%d, %d decompositions, %d violations", p_d, count, len(violations))
    if violations:
        return CheckReport.failed("flatness", params, {"p_value": p_d, "violations": violations})
    witness = {"equalities": ties} if ties else None
    return CheckReport.passed("flatness", params, witness)
