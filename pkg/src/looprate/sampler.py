"""Monte Carlo side: Wilson's algorithm and the marked cycle-rooted
spanning tree chain whose loop events give the looping rates.
"""
import os
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .errors import PreconditionFailed, UnreachableTarget

MIN_STEPS = 10**4
BATCHES = 100
Z99 = 2.576
SEED_ENV = "LOOPRATE_SEED"
DEFAULT_SEED = 20240601


def resolve_seed(seed=None):
    """Explicit seed wins, then $LOOPRATE_SEED, then the package default."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return DEFAULT_SEED


class RngStream:
    """PCG64 generator with buffered uniforms.

    ``spawn`` derives independent child streams through SeedSequence, so
    children never share state with each other or the parent.
    """

    BLOCK = 4096

    def __init__(self, seed=None, seed_seq=None):
        self.seed = resolve_seed(seed) if seed_seq is None else None
        self._ss = seed_seq if seed_seq is not None else np.random.SeedSequence(self.seed)
        self.gen = np.random.Generator(np.random.PCG64(self._ss))
        self.counter = 0
        self._buf = []
        self._pos = 0

    def uniform(self):
        if self._pos >= len(self._buf):
            self._buf = self.gen.random(self.BLOCK).tolist()
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        self.counter += 1
        return x

    def integers(self, n):
        return min(int(self.uniform() * n), n - 1)

    def spawn(self, k):
        return [RngStream(seed_seq=ss) for ss in self._ss.spawn(k)]


def as_stream(rng):
    if isinstance(rng, RngStream):
        return rng
    return RngStream(rng)


class _Walker:
    """Neighbour tables with cumulative weights for O(log d) steps."""

    _cache = {}

    def __init__(self, graph):
        self.graph = graph
        self.nbr = {}
        self.eid = {}
        self.cum = {}
        for v in graph.vertices:
            inc = graph.incident[v]
            self.nbr[v] = [graph.edge(e).other(v) for e in inc]
            self.eid[v] = list(inc)
            c = list(accumulate(float(graph.edge(e).w) for e in inc))
            self.cum[v] = c

    @classmethod
    def get(cls, graph):
        w = cls._cache.get(id(graph))
        if w is None or w.graph is not graph:
            w = cls(graph)
            cls._cache[id(graph)] = w
        return w

    def step(self, v, rng):
        c = self.cum[v]
        k = bisect_right(c, rng.uniform() * c[-1])
        if k >= len(c):
            k = len(c) - 1
        return self.nbr[v][k], self.eid[v][k]


def _check_reach(graph, start, targets):
    # graphs are connected, so any target vertex is reachable
    if not any(t in graph.index for t in targets):
        raise UnreachableTarget(f"no target vertex reachable from {start!r}")


def lerw(graph, start, targets, rng):
    """Chronological loop erasure of the weighted walk from ``start`` until it hits ``targets``."""
    targets = set(targets) if not isinstance(targets, (set, frozenset)) else targets
    if start in targets:
        raise PreconditionFailed("start vertex is already in the target set")
    if start not in graph.index:
        raise PreconditionFailed(f"{start!r} is not a vertex")
    _check_reach(graph, start, targets)
    rng = as_stream(rng)
    walker = _Walker.get(graph)
    path = [start]
    where = {start: 0}
    v = start
    while v not in targets:
        v, _ = walker.step(v, rng)
        if v in where:
            cut = where[v]
            for x in path[cut + 1:]:
                del where[x]
            del path[cut + 1:]
        else:
            where[v] = len(path)
            path.append(v)
    return path


def wilson_ust(graph, root=None, rng=None):
    """Weighted uniform spanning tree as a map vertex -> (parent, edge id)."""
    root = graph.default_sink() if root is None else root
    rng = as_stream(rng)
    walker = _Walker.get(graph)
    in_tree = {root}
    nxt = {}
    tree = {}
    for v in graph.vertices:
        u = v
        while u not in in_tree:
            nxt[u] = walker.step(u, rng)
            u = nxt[u][0]
        u = v
        while u not in in_tree:
            tree[u] = nxt[u]
            in_tree.add(u)
            u = nxt[u][0]
    return tree


def tree_edges(tree):
    return frozenset(eid for _, eid in tree.values())


# ---------------------------------------------------------------------------
# marked oriented cycle-rooted spanning trees


class MarkedCRST:
    """Every vertex has one outgoing (head, edge id); the mark sits on the unique cycle."""

    def __init__(self, out, mark, observer, graph=None):
        self.graph = graph
        self.out = dict(out)
        self.mark = mark
        self.observer = observer
        self._set_cycle()
        if mark not in self.cycle:
            raise PreconditionFailed("mark must lie on the cycle")

    def _set_cycle(self):
        seen = set()
        x = self.mark
        while x not in seen:
            seen.add(x)
            x = self.out[x][0]
        cyc = [x]
        y = self.out[x][0]
        while y != x:
            cyc.append(y)
            y = self.out[y][0]
        self.cycle = set(cyc)
        self.length = len(cyc)

    def check(self, graph):
        if set(self.out) != set(graph.vertices):
            return False
        for v, (u, eid) in self.out.items():
            e = graph.edge(eid)
            if {e.u, e.v} != {u, v} and not (e.u == v and e.v == u):
                return False
        # every vertex reaches the cycle
        for v in graph.vertices:
            x, k = v, 0
            while x not in self.cycle:
                x = self.out[x][0]
                k += 1
                if k > graph.n:
                    return False
        return self.mark in self.cycle

    def observer_hits_at_mark(self):
        x = self.observer
        while x not in self.cycle:
            x = self.out[x][0]
        return x == self.mark


def initial_crst(graph, rng, observer=None, root=None):
    """Wilson tree toward ``root`` plus one weighted out-edge at the root."""
    rng = as_stream(rng)
    root = graph.vertices[0] if root is None else root
    observer = graph.vertices[0] if observer is None else observer
    tree = wilson_ust(graph, root, rng)
    u, eid = _Walker.get(graph).step(root, rng)
    tree[root] = (u, eid)
    return MarkedCRST(tree, u, observer, graph)


def crst_chain_step(state, rng, graph=None):
    """Re-draw the mark's out-edge and slide the mark to its head.

    Returns (state, loop length or None).  The state is updated in place.
    """
    rng = as_stream(rng)
    walker = _Walker.get(graph if graph is not None else state.graph)
    old = state.mark
    u, eid = walker.step(old, rng)
    out = state.out
    out[old] = (u, eid)
    cyc = [u]
    x = u
    while x != old:
        x = out[x][0]
        cyc.append(x)
    state.cycle = set(cyc)
    state.length = len(cyc)
    state.mark = u
    if state.observer_hits_at_mark():
        return state, state.length
    return state, None


@dataclass(frozen=True)
class EstimateReport:
    estimate: float
    stderr: float
    half_width: float
    samples: int
    seed: object

    def contains(self, value, sigmas=3.0):
        return abs(self.estimate - float(value)) <= sigmas * self.stderr + 1e-12

    def as_dict(self):
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "half_width": self.half_width,
            "samples": self.samples,
            "seed": self.seed,
        }


def _report(values, seed, samples):
    v = np.asarray(values, dtype=float)
    est = float(v.mean())
    se = float(v.std(ddof=1) / np.sqrt(len(v))) if len(v) > 1 else 0.0
    return EstimateReport(est, se, Z99 * se, samples, seed)


def _ratio_report(num, den, seed, samples):
    """Ratio of batch totals with a delta-method standard error."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    keep = den.sum()
    if keep == 0:
        return EstimateReport(float("nan"), float("nan"), float("nan"), samples, seed)
    r = num.sum() / keep
    resid = num - r * den
    k = len(num)
    se = float(np.sqrt(k / (k - 1) * (resid ** 2).sum()) / keep) if k > 1 else 0.0
    return EstimateReport(float(r), se, Z99 * se, samples, seed)


def run_chain(graph, steps, rng, observer=None, batches=BATCHES):
    """Batch totals (events, long events, long-loop length, steps) and mark visit counts."""
    rng = as_stream(rng)
    state = initial_crst(graph, rng, observer)
    walker = _Walker.get(graph)
    size = steps // batches
    ev = np.zeros(batches)
    long_ev = np.zeros(batches)
    long_len = np.zeros(batches)
    visits = dict.fromkeys(graph.vertices, 0)
    out = state.out
    obs = state.observer
    b = 0
    done = 0
    for t in range(size * batches):
        old = state.mark
        u, eid = walker.step(old, rng)
        out[old] = (u, eid)
        cyc = {u}
        x = u
        while x != old:
            x = out[x][0]
            cyc.add(x)
        x = obs
        while x not in cyc:
            x = out[x][0]
        state.mark = u
        visits[u] += 1
        if x == u:
            ev[b] += 1
            if len(cyc) >= 3:
                long_ev[b] += 1
                long_len[b] += len(cyc)
        done += 1
        if done == size:
            b += 1
            done = 0
    state.cycle = cyc
    state.length = len(cyc)
    return ev, long_ev, long_len, size, visits, state


def estimate_looping(graph, steps, seed=None, observer=None):
    """Estimates of rho, tau and lambda from one long chain run.

    rho and tau are loop events per step; lambda is the mean length of the
    long (length >= 3) loops.  Errors come from 100 batch means.
    """
    if steps < MIN_STEPS:
        raise PreconditionFailed(f"steps={steps} is below the minimum {MIN_STEPS}")
    seed = resolve_seed(seed)
    rng = RngStream(seed)
    ev, long_ev, long_len, size, visits, _ = run_chain(graph, steps, rng, observer)
    n = size * BATCHES
    return {
        "rho": _report(ev / size, seed, n),
        "tau": _report(long_ev / size, seed, n),
        "lambda": _ratio_report(long_len, long_ev, seed, n),
        "mark_visits": {v: c / n for v, c in visits.items()},
    }


def estimate_edge_probs(graph, root, samples, seed=None):
    """Empirical Pr[e in T] for every edge, as EstimateReports keyed by edge id."""
    seed = resolve_seed(seed)
    rng = RngStream(seed)
    counts = dict.fromkeys(graph.edge_by_id, 0)
    for _ in range(samples):
        for _, eid in wilson_ust(graph, root, rng).values():
            counts[eid] += 1
    out = {}
    for eid, c in counts.items():
        p = c / samples
        se = float(np.sqrt(p * (1 - p) / samples))
        out[eid] = EstimateReport(p, se, Z99 * se, samples, seed)
    return out
