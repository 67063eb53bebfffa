"""Threshold-weighted proximity graphs over facilities and safety objects.

Two builders cover the two graph shapes the analysis needs: a bipartite
facility-to-object graph (the compliance workhorse) and a unipartite
object-to-object graph (deployment topology). Edges connect vertices
whose great-circle distance is at most the threshold, inclusive, and
carry the exact distance as weight.

Vertex ids are namespace-prefixed ("f:" for facilities, "o:" for safety
objects) so a facility and an object sharing a raw id can never collide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .geo import build_spatial_index
from .ingest import Facility, SafetyObject

FACILITY_PREFIX = "f:"
OBJECT_PREFIX = "o:"

#: Grid cells track the query radius but never degenerate below this.
_MIN_CELL_M = 25.0


def facility_vertex(raw_id: str) -> str:
    return FACILITY_PREFIX + raw_id


def object_vertex(raw_id: str) -> str:
    return OBJECT_PREFIX + raw_id


def raw_id(vertex_id: str) -> str:
    """Strip the namespace prefix from a graph vertex id."""
    return vertex_id[2:]


@dataclass(frozen=True)
class GraphNode:
    id: str
    lat: float
    lon: float
    kind: str  # "facility" | "hydrant" | "shelter"


@dataclass(frozen=True)
class GraphEdge:
    u: str
    v: str
    weight_m: float


@dataclass(frozen=True)
class ProximityGraph:
    mode: str  # "bipartite" | "unipartite"
    left_vertices: tuple[str, ...]
    right_vertices: tuple[str, ...]
    edges: tuple[GraphEdge, ...]
    threshold_m: float
    nodes: tuple[GraphNode, ...]

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return self.left_vertices + self.right_vertices


def _cell_size_for(threshold_m: float) -> float:
    return max(threshold_m, _MIN_CELL_M)


def build_bipartite_graph(
    facilities: Sequence[Facility],
    objects: Sequence[SafetyObject],
    threshold_m: float,
) -> ProximityGraph:
    """Graph joining each facility to every safety object within threshold.

    Edge discovery runs one radius query per facility against an index
    over the objects, so construction is near-linear for city data while
    matching the all-pairs definition exactly.
    """
    if not threshold_m >= 0:  # also rejects NaN
        raise ValueError(f"invalid threshold: {threshold_m}")

    index = build_spatial_index(
        [(o.id, o.location) for o in objects], cell_size_m=_cell_size_for(threshold_m)
    )
    edges: list[GraphEdge] = []
    for f in facilities:
        for oid, dist in index.query_within(f.location, threshold_m):
            edges.append(GraphEdge(facility_vertex(f.id), object_vertex(oid), dist))
    edges.sort(key=lambda e: (e.u, e.v))

    nodes = [GraphNode(facility_vertex(f.id), f.location.lat, f.location.lon, "facility") for f in facilities]
    nodes += [GraphNode(object_vertex(o.id), o.location.lat, o.location.lon, o.kind) for o in objects]
    nodes.sort(key=lambda n: n.id)

    return ProximityGraph(
        mode="bipartite",
        left_vertices=tuple(sorted(facility_vertex(f.id) for f in facilities)),
        right_vertices=tuple(sorted(object_vertex(o.id) for o in objects)),
        edges=tuple(edges),
        threshold_m=float(threshold_m),
        nodes=tuple(nodes),
    )


def build_unipartite_graph(
    objects: Sequence[SafetyObject], threshold_m: float
) -> ProximityGraph:
    """Undirected simple graph over safety objects within threshold of each other.

    No self-loops; each unordered pair appears once, stored with u < v.
    """
    if not threshold_m >= 0:  # also rejects NaN
        raise ValueError(f"invalid threshold: {threshold_m}")

    index = build_spatial_index(
        [(o.id, o.location) for o in objects], cell_size_m=_cell_size_for(threshold_m)
    )
    edges: list[GraphEdge] = []
    for o in objects:
        for other_id, dist in index.query_within(o.location, threshold_m):
            if other_id <= o.id:
                continue  # skip self and keep one direction per pair
            edges.append(GraphEdge(object_vertex(o.id), object_vertex(other_id), dist))
    edges.sort(key=lambda e: (e.u, e.v))

    nodes = tuple(
        sorted(
            (GraphNode(object_vertex(o.id), o.location.lat, o.location.lon, o.kind) for o in objects),
            key=lambda n: n.id,
        )
    )
    return ProximityGraph(
        mode="unipartite",
        left_vertices=tuple(sorted(object_vertex(o.id) for o in objects)),
        right_vertices=(),
        edges=tuple(edges),
        threshold_m=float(threshold_m),
        nodes=nodes,
    )


def isolated_vertices(g: ProximityGraph, side: str = "left") -> frozenset[str]:
    """Vertices of the chosen side with no incident edge.

    For unipartite graphs the side argument is ignored.
    """
    touched: set[str] = set()
    for e in g.edges:
        touched.add(e.u)
        touched.add(e.v)
    if g.mode == "unipartite":
        pool: Iterable[str] = g.left_vertices
    else:
        pool = g.left_vertices if side == "left" else g.right_vertices
    return frozenset(v for v in pool if v not in touched)


def degree_centrality(g: ProximityGraph) -> dict[str, tuple[int, float]]:
    """Per-vertex (degree, normalized degree).

    Bipartite normalization divides by the opposite side's size; the
    unipartite one divides by n - 1. Both floors at 1 to avoid dividing
    by zero on degenerate graphs.
    """
    degree: dict[str, int] = {v: 0 for v in g.vertex_ids}
    for e in g.edges:
        degree[e.u] += 1
        degree[e.v] += 1

    out: dict[str, tuple[int, float]] = {}
    if g.mode == "bipartite":
        left_n = max(1, len(g.left_vertices))
        right_n = max(1, len(g.right_vertices))
        for v in g.left_vertices:
            out[v] = (degree[v], degree[v] / right_n)
        for v in g.right_vertices:
            out[v] = (degree[v], degree[v] / left_n)
    else:
        denom = max(1, len(g.left_vertices) - 1)
        for v in g.left_vertices:
            out[v] = (degree[v], degree[v] / denom)
    return out


def connected_components(g: ProximityGraph) -> list[frozenset[str]]:
    """Maximal connected vertex sets, largest first, ties by smallest id."""
    adjacency: dict[str, list[str]] = {v: [] for v in g.vertex_ids}
    for e in g.edges:
        adjacency[e.u].append(e.v)
        adjacency[e.v].append(e.u)

    seen: set[str] = set()
    components: list[frozenset[str]] = []
    for start in g.vertex_ids:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        members = {start}
        while stack:
            current = stack.pop()
            for neighbor in adjacency[current]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    members.add(neighbor)
                    stack.append(neighbor)
        components.append(frozenset(members))
    components.sort(key=lambda c: (-len(c), min(c)))
    return components


def graph_to_dict(g: ProximityGraph) -> dict:
    """Canonical serialization: nodes sorted by id, edges sorted by (u, v)."""
    return {
        "mode": g.mode,
        "threshold_m": g.threshold_m,
        "nodes": [
            {"id": n.id, "lat": n.lat, "lon": n.lon, "kind": n.kind} for n in g.nodes
        ],
        "edges": [{"u": e.u, "v": e.v, "weight_m": e.weight_m} for e in g.edges],
    }
