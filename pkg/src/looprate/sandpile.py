"""Abelian sandpiles on integer-weighted graphs with a sink.

An edge of weight w counts as w parallel edges.  Heights live on the non-sink
vertices; the sink absorbs sand and never topples.
"""
from collections import Counter, deque
from fractions import Fraction
from itertools import product
from math import prod

from .errors import (
    NonIntegerWeight,
    NotATree,
    NotRecurrent,
    TooLarge,
    Unstable,
    VertexStable,
)

ENUMERATION_LIMIT = 10**7


class _Host:
    """Integer adjacency data for one (graph, sink) pair."""

    _cache = {}

    def __init__(self, graph, sink):
        for e in graph.edges:
            if e.w != int(e.w):
                raise NonIntegerWeight(f"edge {e.id!r} has weight {e.w}")
        self.graph = graph
        self.sink = sink
        self.order = [v for v in graph.vertices if v != sink]
        self.pos = {v: i for i, v in enumerate(self.order)}
        self.deg = [int(graph.degree(v)) for v in self.order]
        self.to_sink = [0] * len(self.order)
        nb = [Counter() for _ in self.order]
        for e in graph.edges:
            w = int(e.w)
            for a, b in ((e.u, e.v), (e.v, e.u)):
                if a == sink:
                    continue
                if b == sink:
                    self.to_sink[self.pos[a]] += w
                else:
                    nb[self.pos[a]][self.pos[b]] += w
        self.nbrs = [sorted(c.items()) for c in nb]
        self.edge_total = sum(int(e.w) for e in graph.edges)
        self.sink_degree = int(graph.degree(sink))
        self.unit = all(e.w == 1 for e in graph.edges)
        self._queries = None

    def queries(self):
        """Per vertex h, the (outside vertex, edge id) pairs it queries, in order."""
        if self._queries is None:
            g = self.graph
            idx = g.index
            self._queries = {}
            for h in g.vertices:
                inc = sorted((idx[g.edge(eid).other(h)], g.edge_pos[eid], eid) for eid in g.incident[h])
                self._queries[h] = [(g.edge(eid).other(h), eid) for _, _, eid in inc]
        return self._queries

    @classmethod
    def get(cls, graph, sink):
        key = (id(graph), sink)
        host = cls._cache.get(key)
        if host is None or host.graph is not graph:
            host = cls(graph, sink)
            cls._cache[key] = host
        return host


class SandpileConfig:
    """Grain counts on the non-sink vertices of ``graph``."""

    def __init__(self, graph, heights, sink=None):
        sink = graph.default_sink() if sink is None else sink
        self.host = _Host.get(graph, sink)
        if isinstance(heights, dict):
            h = [0] * len(self.host.order)
            for v, x in heights.items():
                if v == sink:
                    continue
                h[self.host.pos[v]] = int(x)
        else:
            h = [int(x) for x in heights]
            if len(h) != len(self.host.order):
                raise ValueError("need one height per non-sink vertex")
        if any(x < 0 for x in h):
            raise ValueError("heights must be non-negative")
        self.h = tuple(h)

    @property
    def graph(self):
        return self.host.graph

    @property
    def sink(self):
        return self.host.sink

    @property
    def heights(self):
        return dict(zip(self.host.order, self.h))

    def _new(self, h):
        out = object.__new__(SandpileConfig)
        out.host = self.host
        out.h = tuple(h)
        return out

    def __eq__(self, other):
        return isinstance(other, SandpileConfig) and self.host is other.host and self.h == other.h

    def __hash__(self):
        return hash(self.h)

    def __repr__(self):
        return f"SandpileConfig({self.heights!r})"

    def total(self):
        return sum(self.h)

    def is_stable(self):
        return all(x < d for x, d in zip(self.h, self.host.deg))

    def level(self):
        """Total sand shifted down by |E| - deg(sink)."""
        return self.total() - self.host.edge_total + self.host.sink_degree


def topple(config, v):
    host = config.host
    i = host.pos[v]
    if config.h[i] < host.deg[i]:
        raise VertexStable(f"{v!r} holds {config.h[i]} < degree {host.deg[i]}")
    h = list(config.h)
    h[i] -= host.deg[i]
    for j, w in host.nbrs[i]:
        h[j] += w
    return config._new(h)


def _stabilize(h, host):
    deg, nbrs = host.deg, host.nbrs
    counts = [0] * len(h)
    todo = deque(i for i in range(len(h)) if h[i] >= deg[i])
    queued = set(todo)
    while todo:
        i = todo.popleft()
        queued.discard(i)
        t = h[i] // deg[i]
        if t == 0:
            continue
        h[i] -= t * deg[i]
        counts[i] += t
        for j, w in nbrs[i]:
            h[j] += t * w
            if h[j] >= deg[j] and j not in queued:
                queued.add(j)
                todo.append(j)
    return counts


def stabilize(config, rng=None):
    """Topple until stable; returns (stable config, {vertex: topple count}).

    With ``rng`` the next vertex is a uniformly random unstable one and each
    visit topples once, which exercises the abelian property.
    """
    host = config.host
    h = list(config.h)
    if rng is None:
        counts = _stabilize(h, host)
    else:
        counts = [0] * len(h)
        while True:
            unstable = [i for i in range(len(h)) if h[i] >= host.deg[i]]
            if not unstable:
                break
            i = unstable[int(rng.integers(len(unstable)))]
            h[i] -= host.deg[i]
            counts[i] += 1
            for j, w in host.nbrs[i]:
                h[j] += w
    return config._new(h), dict(zip(host.order, counts))


def is_recurrent(config):
    """Burning test: fire the sink once; recurrent iff every vertex topples exactly once."""
    if not config.is_stable():
        raise Unstable("burning test needs a stable configuration")
    host = config.host
    h = [x + s for x, s in zip(config.h, host.to_sink)]
    counts = _stabilize(h, host)
    return all(c == 1 for c in counts)


def _burns(h, host):
    """Dhar's burning rule; an independent route to the recurrence test."""
    unburnt_edges = [d - s for d, s in zip(host.deg, host.to_sink)]
    burnt = [False] * len(h)
    stack = [i for i in range(len(h)) if h[i] >= unburnt_edges[i]]
    for i in stack:
        burnt[i] = True
    left = len(h) - len(stack)
    while stack:
        i = stack.pop()
        for j, w in host.nbrs[i]:
            if not burnt[j]:
                unburnt_edges[j] -= w
                if h[j] >= unburnt_edges[j]:
                    burnt[j] = True
                    left -= 1
                    stack.append(j)
    return left == 0


def is_recurrent_dhar(config):
    return _burns(config.h, config.host)


# ---------------------------------------------------------------------------
# tree <-> sandpile exploration


def _check_unit(host):
    if not host.unit:
        raise NonIntegerWeight("tree exploration needs a unit-weight multigraph; expand weights into parallel edges")


def _frontier_queries(host, answer):
    """Run the FIFO exploration from the sink.

    ``answer(u, eid, marks)`` decides whether edge ``eid`` from outside vertex
    ``u`` to the current tree is in the tree.  Returns (parent edge map, marks).
    """
    sink = host.sink
    queries = host.queries()
    in_tree = {sink}
    parent = {}
    marks = Counter()
    queue = deque([sink])
    while queue:
        h = queue.popleft()
        for u, eid in queries[h]:
            if u in in_tree:
                continue
            if answer(u, eid, marks[u]):
                parent[u] = eid
                in_tree.add(u)
                queue.append(u)
            else:
                marks[u] += 1
    return parent, marks


def tree_to_sandpile(tree, graph, s=None):
    """Map a spanning arborescence (vertex -> edge id towards ``s``) to a sandpile.

    Height = degree - 1 - number of refused queries at that vertex.
    """
    s = graph.default_sink() if s is None else s
    host = _Host.get(graph, s)
    _check_unit(host)
    check_arborescence(tree, graph, s)
    parent, marks = _frontier_queries(host, lambda u, eid, _: tree[u] == eid)
    return SandpileConfig(graph, [d - 1 - marks[v] for v, d in zip(host.order, host.deg)], s)


def sandpile_to_tree(config):
    """Inverse exploration: a vertex accepts once it has refused deg-1-height queries."""
    host = config.host
    _check_unit(host)
    if not config.is_stable() or not is_recurrent(config):
        raise NotRecurrent(f"{config!r} is not recurrent")
    need = {v: host.deg[i] - 1 - config.h[i] for i, v in enumerate(host.order)}
    parent, _ = _frontier_queries(host, lambda u, eid, marks: marks == need[u])
    if len(parent) != len(host.order):
        raise NotRecurrent("exploration did not reach every vertex")
    return parent


def check_arborescence(tree, graph, s):
    others = [v for v in graph.vertices if v != s]
    if set(tree) != set(others):
        raise NotATree("tree must give one parent edge per non-sink vertex")
    for v in others:
        eid = tree[v]
        if eid not in graph.edge_by_id or v not in (graph.edge(eid).u, graph.edge(eid).v):
            raise NotATree(f"edge {eid!r} is not incident to {v!r}")
    for v in others:
        seen = set()
        x = v
        while x != s:
            if x in seen:
                raise NotATree(f"cycle through {x!r}")
            seen.add(x)
            x = graph.edge(tree[x]).other(x)


def orient_tree(graph, edge_ids, root):
    """Parent-edge map of the spanning tree ``edge_ids`` directed to ``root``."""
    adj = {v: [] for v in graph.vertices}
    for eid in edge_ids:
        e = graph.edge(eid)
        adj[e.u].append((e.v, eid))
        adj[e.v].append((e.u, eid))
    parent = {}
    seen = {root}
    q = deque([root])
    while q:
        x = q.popleft()
        for y, eid in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = eid
                q.append(y)
    if len(seen) != graph.n:
        raise NotATree("edge set does not span")
    return parent


def spanning_trees(graph):
    """Every spanning tree as a tuple of edge ids (exhaustive)."""
    from .forests import _UnionFind

    edges = [(graph.index[e.u], graph.index[e.v], e.id) for e in graph.edges]
    n = graph.n
    uf = _UnionFind(n)
    out = []
    chosen = []

    def rec(pos):
        if len(chosen) == n - 1:
            out.append(tuple(chosen))
            return
        for p in range(pos, len(edges) - (n - 1 - len(chosen)) + 1):
            i, j, eid = edges[p]
            ri, rj = uf.find(i), uf.find(j)
            if ri != rj:
                uf.union(ri, rj)
                chosen.append(eid)
                rec(p + 1)
                chosen.pop()
                uf.undo()

    rec(0)
    return out


# ---------------------------------------------------------------------------
# enumeration and level statistics


def stable_count(graph, s=None):
    s = graph.default_sink() if s is None else s
    return prod(_Host.get(graph, s).deg)


def stable_configs(graph, s=None):
    s = graph.default_sink() if s is None else s
    host = _Host.get(graph, s)
    total = prod(host.deg)
    if total > ENUMERATION_LIMIT:
        raise TooLarge(f"{total} stable configurations exceeds {ENUMERATION_LIMIT}")
    proto = SandpileConfig(graph, [0] * len(host.order), s)
    for h in product(*(range(d) for d in host.deg)):
        yield proto._new(h)


def recurrent_configs(graph, s=None):
    return [c for c in stable_configs(graph, s) if _burns(c.h, c.host)]


def level_spectrum(graph, s=None):
    """Number of recurrent sandpiles at each level."""
    return dict(sorted(Counter(c.level() for c in recurrent_configs(graph, s)).items()))


def level_moments(spectrum):
    """(mean, variance) of the level under the uniform recurrent measure."""
    n = sum(spectrum.values())
    mean = Fraction(sum(k * c for k, c in spectrum.items()), n)
    second = Fraction(sum(k * k * c for k, c in spectrum.items()), n)
    return mean, second - mean * mean


def binomial_moment(spectrum, j):
    from math import comb

    return sum(comb(k, j) * c for k, c in spectrum.items())


def mean_sand_per_vertex(graph, s=None, configs=None):
    configs = recurrent_configs(graph, s) if configs is None else configs
    total = sum(c.total() for c in configs)
    return Fraction(total, len(configs) * graph.n)
