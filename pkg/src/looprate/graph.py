"""Weighted undirected multigraphs and their planar duals."""
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BridgePresent,
    DisconnectedGraph,
    EmptyMergeSet,
    IncompleteRotation,
    NonPlanarRotation,
    NonPositiveWeight,
    SelfLoop,
    UnknownEndpoint,
)


def parse_weight(x):
    """Integers, Fractions, decimal strings and ``"p/q"`` strings become
    exact Fractions; Python floats stay floats."""
    if isinstance(x, bool):
        raise TypeError("boolean is not a weight")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return x
    if hasattr(x, "p") and hasattr(x, "q"):  # sympy Rational
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"unsupported weight {x!r}")


@dataclass(frozen=True)
class Edge:
    u: object
    v: object
    w: object
    id: object

    def other(self, x):
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise UnknownEndpoint(f"{x!r} is not an endpoint of edge {self.id!r}")


class WeightedGraph:
    """Connected undirected multigraph with positive edge weights.

    Vertex ids are opaque hashables; their order is the order given at
    construction and is what "lowest vertex" means everywhere.  Edges may be
    parallel but never loops.  Instances are treated as immutable.
    """

    def __init__(self, vertices, edges, sink=None):
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        built = []
        for pos, e in enumerate(edges):
            if isinstance(e, Edge):
                u, v, w, eid = e.u, e.v, e.w, e.id
            elif len(e) == 4:
                u, v, w, eid = e
            else:
                (u, v, w), eid = e, pos
            if u not in self.index or v not in self.index:
                raise UnknownEndpoint(f"edge {eid!r} has an undeclared endpoint")
            if u == v:
                raise SelfLoop(f"edge {eid!r} is a self-loop at {u!r}")
            w = parse_weight(w)
            if not w > 0:
                raise NonPositiveWeight(f"edge {eid!r} has weight {w}")
            built.append(Edge(u, v, w, eid))
        self.edges = tuple(built)
        self.edge_by_id = {e.id: e for e in self.edges}
        if len(self.edge_by_id) != len(self.edges):
            raise ValueError("duplicate edge ids")
        self.edge_pos = {e.id: i for i, e in enumerate(self.edges)}
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append(e.id)
            inc[e.v].append(e.id)
        self.incident = {v: tuple(ids) for v, ids in inc.items()}
        if sink is not None and sink not in self.index:
            raise UnknownEndpoint(f"sink {sink!r} is not a vertex")
        self.sink = sink
        self._check_connected()

    def _check_connected(self):
        if not self.vertices:
            raise DisconnectedGraph("graph has no vertices")
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            x = todo.pop()
            for eid in self.incident[x]:
                y = self.edge_by_id[eid].other(x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        if len(seen) != len(self.vertices):
            raise DisconnectedGraph(
                f"{len(self.vertices) - len(seen)} vertices unreachable from {self.vertices[0]!r}"
            )

    def __repr__(self):
        return f"WeightedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, sink={self.sink!r})"

    @property
    def n(self):
        return len(self.vertices)

    @property
    def m(self):
        return len(self.edges)

    def edge(self, eid):
        return self.edge_by_id[eid]

    def neighbors(self, v):
        """(neighbor, weight, edge id) for every edge at ``v``."""
        return [(self.edge_by_id[eid].other(v), self.edge_by_id[eid].w, eid) for eid in self.incident[v]]

    def degree(self, v):
        """Weighted degree."""
        return sum((self.edge_by_id[eid].w for eid in self.incident[v]), Fraction(0))

    def total_weight(self):
        return sum((e.w for e in self.edges), Fraction(0))

    def mean_degree(self):
        """Mean weighted degree 2 sum(w) / |V|."""
        return 2 * self.total_weight() / self.n

    def is_unweighted(self):
        """True when every edge carries the same weight."""
        return len({e.w for e in self.edges}) <= 1

    def with_sink(self, sink):
        return WeightedGraph(self.vertices, self.edges, sink)

    def default_sink(self):
        return self.sink if self.sink is not None else self.vertices[0]


def build_graph(vertices, edges, sink=None):
    return WeightedGraph(vertices, edges, sink)


# ---------------------------------------------------------------------------
# rotation systems and faces


@dataclass(frozen=True)
class Dart:
    """An edge traversed from ``tail`` to ``head``."""

    edge: object
    tail: object
    head: object


def check_rotation(graph, rotation):
    for v in graph.vertices:
        got = list(rotation.get(v, ()))
        if sorted(map(repr, got)) != sorted(map(repr, graph.incident[v])):
            raise IncompleteRotation(
                f"rotation at {v!r} is {got!r}, incident edges are {list(graph.incident[v])!r}"
            )
    extra = set(rotation) - set(graph.vertices)
    if extra:
        raise IncompleteRotation(f"rotation mentions unknown vertices {sorted(map(repr, extra))}")


def faces(graph, rotation):
    """Trace the faces of the embedding given by ``rotation``.

    The face after dart u->v continues with the edge that follows it in the
    cyclic order at v.  Faces are returned as lists of darts; the first face
    is the one containing the smallest dart (by tail position, then edge
    position).
    """
    check_rotation(graph, rotation)
    if not graph.edges:
        return [[]]
    pos = {}
    for v, ids in rotation.items():
        for i, eid in enumerate(ids):
            pos[(v, eid)] = i

    def next_dart(d):
        ring = rotation[d.head]
        f = ring[(pos[(d.head, d.edge)] + 1) % len(ring)]
        return Dart(f, d.head, graph.edge_by_id[f].other(d.head))

    darts = []
    for e in graph.edges:
        darts.append(Dart(e.id, e.u, e.v))
        darts.append(Dart(e.id, e.v, e.u))
    darts.sort(key=lambda d: (graph.index[d.tail], graph.edge_pos[d.edge]))

    seen = set()
    out = []
    for start in darts:
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d)
            d = next_dart(d)
        out.append(face)
    if len(out) - graph.m + graph.n != 2:
        raise NonPlanarRotation(
            f"V - E + F = {graph.n} - {graph.m} + {len(out)} != 2; rotation is not planar"
        )
    return out


@dataclass(frozen=True)
class DualGraph:
    graph: WeightedGraph
    rotation: dict
    faces: list
    edge_map: dict

    @property
    def sink(self):
        return self.graph.sink


def _reciprocal(w):
    return 1 / w if isinstance(w, Fraction) else 1.0 / w


def dual(graph, rotation, sink_face=0):
    """Planar dual: one vertex per face, edge e* with weight 1/w(e).

    Dual vertex ids are face indices; edge ids are shared with the primal.
    """
    fs = faces(graph, rotation)
    face_of = {}
    for i, face in enumerate(fs):
        for d in face:
            face_of[(d.edge, d.tail)] = i
    edges = []
    for e in graph.edges:
        left, right = face_of[(e.id, e.u)], face_of[(e.id, e.v)]
        if left == right:
            raise BridgePresent(f"edge {e.id!r} is a bridge; its dual would be a self-loop")
        edges.append((left, right, _reciprocal(e.w), e.id))
    drot = {i: [d.edge for d in face] for i, face in enumerate(fs)}
    g = WeightedGraph(range(len(fs)), edges, sink=sink_face)
    return DualGraph(g, drot, fs, {e.id: e.id for e in graph.edges})


def bridges(graph):
    """Edge ids whose removal disconnects the graph (parallel edges aware)."""
    index = {}
    low = {}
    out = []
    counter = 0
    root = graph.vertices[0]
    index[root] = low[root] = 0
    stack = [(root, None, iter(graph.incident[root]))]
    while stack:
        v, via, it = stack[-1]
        advanced = False
        for eid in it:
            if eid == via:
                continue
            w = graph.edge_by_id[eid].other(v)
            if w not in index:
                counter += 1
                index[w] = low[w] = counter
                stack.append((w, eid, iter(graph.incident[w])))
                advanced = True
                break
            low[v] = min(low[v], index[w])
        if advanced:
            continue
        stack.pop()
        if stack:
            parent = stack[-1][0]
            low[parent] = min(low[parent], low[v])
            if low[v] > index[parent]:
                out.append(via)
    return out


def merge_vertices(graph, vset, label="sink"):
    """Identify ``vset`` into a single new vertex ``label`` (the new sink).

    Edges inside the set are dropped; parallel edges are kept.
    """
    vset = set(vset)
    if not vset:
        raise EmptyMergeSet("nothing to merge")
    for v in vset:
        if v not in graph.index:
            raise UnknownEndpoint(f"{v!r} is not a vertex")
    if label in graph.index and label not in vset:
        raise ValueError(f"label {label!r} already names a vertex")
    verts = [v for v in graph.vertices if v not in vset] + [label]
    edges = []
    for e in graph.edges:
        u = label if e.u in vset else e.u
        v = label if e.v in vset else e.v
        if u != v:
            edges.append((u, v, e.w, e.id))
    return WeightedGraph(verts, edges, sink=label)


def induced_rotation(graph, rotation, subgraph):
    """Restrict a rotation system to the edges that survive in ``subgraph``."""
    keep = set(subgraph.edge_by_id)
    return {v: [e for e in rotation[v] if e in keep] for v in subgraph.vertices if v in rotation}


def components(vertices, edge_pairs):
    """Connected components (as a list of sets) of a plain edge list."""
    adj = {v: [] for v in vertices}
    for u, v in edge_pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen, comps = set(), []
    for s in vertices:
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    q.append(y)
        comps.append(comp)
    return comps


# ---------------------------------------------------------------------------
# JSON graph files


def _weight_to_json(w):
    if isinstance(w, Fraction):
        return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"
    return w


def graph_from_json(obj):
    """Parse the graph-file object; returns ``(graph, rotation or None)``.

    Edge ids are positions in the ``edges`` list, which is what rotation
    lists refer to.
    """
    vertices = list(obj["vertices"])
    edges = []
    for i, item in enumerate(obj["edges"]):
        if len(item) != 3:
            raise ValueError(f"edge {i} must be [u, v, w]")
        u, v, w = item
        if isinstance(w, float):
            w = repr(w)
        edges.append((u, v, w, i))
    graph = WeightedGraph(vertices, edges, obj.get("sink"))
    rot = obj.get("rotation")
    rotation = None
    if rot is not None:
        by_name = {str(v): v for v in vertices}
        rotation = {}
        for key, ids in rot.items():
            if key not in by_name:
                raise UnknownEndpoint(f"rotation key {key!r} is not a vertex")
            rotation[by_name[key]] = [int(i) for i in ids]
    return graph, rotation


def graph_to_json(graph, rotation=None):
    pos = graph.edge_pos
    obj = {
        "vertices": list(graph.vertices),
        "edges": [[e.u, e.v, _weight_to_json(e.w)] for e in graph.edges],
    }
    if graph.sink is not None:
        obj["sink"] = graph.sink
    if rotation is not None:
        obj["rotation"] = {str(v): [pos[e] for e in rotation[v]] for v in graph.vertices}
    return obj


def load_graph(path):
    with open(path) as fh:
        return graph_from_json(json.load(fh))
