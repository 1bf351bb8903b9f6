"""Graphs, bijections, edit cost and the exact brute-force edit-distance oracle.

Vertices are dense 0-based integers.  Edge weights are exact rationals; an
unweighted graph behaves as if every edge had weight 1 and every non-edge
weight 0.  Vertex colours are small non-negative integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapExceededError, ParseError
from .rationals import as_fraction, format_rational

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=True)
class Graph:
    """Undirected simple graph with optional edge weights and vertex colours.

    Immutable after construction; all operations on graphs are pure.
    If `weights` is given it is completed so that every edge has a stored
    (nonzero) weight; edges listed without one default to weight 1.
    If `colours` is given it is completed with colour 0 for missing vertices.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    weights: dict | None = None
    colours: dict | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        edges = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            edges.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", frozenset(edges))

        if self.weights is not None:
            weights = {}
            for e, w in self.weights.items():
                e = _norm_edge(*e)
                if e not in self.edges:
                    raise ValueError(f"weight given for non-edge {e}")
                w = as_fraction(w)
                if w == 0:
                    raise ValueError(f"stored weight for edge {e} must be nonzero")
                weights[e] = w
            for e in self.edges:
                weights.setdefault(e, Fraction(1))
            object.__setattr__(self, "weights", weights)

        if self.colours is not None:
            colours = {}
            for v, c in self.colours.items():
                if not 0 <= v < self.n:
                    raise ValueError(f"colour given for unknown vertex {v}")
                if c < 0:
                    raise ValueError("colours must be non-negative integers")
                colours[v] = int(c)
            for v in range(self.n):
                colours.setdefault(v, 0)
            object.__setattr__(self, "colours", colours)

    # weights/colours are plain dicts, so Graph values must not be hashed.
    __hash__ = None

    @property
    def adj(self) -> tuple:
        """Adjacency as a tuple of frozensets, computed once per graph."""
        cached = self.__dict__.get("_adj")
        if cached is None:
            nbrs = [set() for _ in range(self.n)]
            for u, v in self.edges:
                nbrs[u].add(v)
                nbrs[v].add(u)
            cached = tuple(frozenset(s) for s in nbrs)
            self.__dict__["_adj"] = cached
        return cached

    def neighbourhood(self, v: int) -> frozenset:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range")
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def weight(self, u: int, v: int) -> Fraction:
        """Effective weight: stored value, 1 for unweighted edges, 0 otherwise."""
        if u == v:
            return Fraction(0)
        e = _norm_edge(u, v)
        if e not in self.edges:
            return Fraction(0)
        if self.weights is None:
            return Fraction(1)
        return self.weights[e]

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    @property
    def is_coloured(self) -> bool:
        return self.colours is not None

    def colour_of(self, v: int) -> int:
        return 0 if self.colours is None else self.colours[v]

    def colour_classes(self) -> dict:
        classes = {}
        for v in range(self.n):
            classes.setdefault(self.colour_of(v), []).append(v)
        return classes

    def bound_b(self) -> Fraction:
        """Largest absolute effective edge weight (0 for an edgeless graph)."""
        if not self.edges:
            return Fraction(0)
        if self.weights is None:
            return Fraction(1)
        return max(abs(w) for w in self.weights.values())


@dataclass(frozen=True)
class Assignment:
    """A bijection of [n] onto itself, in array form."""

    mapping: tuple

    def __post_init__(self):
        mapping = tuple(self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError("mapping is not a permutation of 0..n-1")

    @classmethod
    def identity(cls, n: int) -> "Assignment":
        return cls(tuple(range(n)))

    def __len__(self):
        return len(self.mapping)

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    def inverse(self) -> "Assignment":
        inv = [0] * len(self.mapping)
        for v, w in enumerate(self.mapping):
            inv[w] = v
        return Assignment(tuple(inv))

    def graph(self) -> "PartialInjection":
        return PartialInjection(frozenset(enumerate(self.mapping)))


@dataclass(frozen=True)
class PartialInjection:
    """A set of (source, target) pairs with distinct sources and targets."""

    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        sources = [a for a, _ in pairs]
        targets = [b for _, b in pairs]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise ValueError("pairs do not form a partial injection")

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def sorted_pairs(self) -> tuple:
        return tuple(sorted(self.pairs))


def _check_same_order(g: Graph, h: Graph):
    if g.n != h.n:
        raise ValueError(f"graphs have different orders ({g.n} vs {h.n})")


def _check_colour_preserving(g: Graph, h: Graph, pi: Assignment):
    for v in range(g.n):
        if g.colour_of(v) != h.colour_of(pi[v]):
            raise ValueError(
                f"bijection does not preserve colours at vertex {v} "
                f"({g.colour_of(v)} vs {h.colour_of(pi[v])})"
            )


def edit_cost(g: Graph, h: Graph, pi: Assignment) -> Fraction:
    """Edit cost of the bijection pi between same-order graphs.

    Unweighted: the number of unordered vertex pairs whose edge/non-edge
    status disagrees under pi.  Weighted: the sum over unordered pairs of
    the absolute weight difference, non-edges counting as weight 0.
    """
    _check_same_order(g, h)
    if len(pi) != g.n:
        raise ValueError("bijection order does not match the graphs")
    if g.is_coloured or h.is_coloured:
        _check_colour_preserving(g, h, pi)

    if not g.is_weighted and not h.is_weighted:
        mapped = frozenset(_norm_edge(pi[u], pi[v]) for u, v in g.edges)
        return Fraction(len(mapped.symmetric_difference(h.edges)))

    total = Fraction(0)
    seen = set()
    for u, v in g.edges:
        f = _norm_edge(pi[u], pi[v])
        seen.add(f)
        total += abs(g.weight(u, v) - h.weight(*f))
    for f in h.edges:
        if f not in seen:
            total += abs(h.weight(*f))
    return total


def _colour_preserving_bijections(g: Graph, h: Graph):
    """Yield every colour-preserving bijection as a mapping tuple.

    Raises if the colour histograms differ (no such bijection exists).
    """
    g_classes = g.colour_classes()
    h_classes = h.colour_classes()
    if sorted(g_classes) != sorted(h_classes) or any(
        len(g_classes[c]) != len(h_classes[c]) for c in g_classes
    ):
        raise ValueError("colour histograms differ; no colour-preserving bijection")
    colours = sorted(g_classes)
    sources = [g_classes[c] for c in colours]
    target_perms = [itertools.permutations(h_classes[c]) for c in colours]
    for combo in itertools.product(*target_perms):
        mapping = [0] * g.n
        for src, tgt in zip(sources, combo):
            for s, t in zip(src, tgt):
                mapping[s] = t
        yield tuple(mapping)


def _all_bijections(g: Graph, h: Graph):
    if g.is_coloured or h.is_coloured:
        yield from _colour_preserving_bijections(g, h)
    else:
        yield from itertools.permutations(range(g.n))


def edit_distance_bruteforce(g: Graph, h: Graph, cap: int = 10):
    """Exact edit distance by enumerating all (colour-preserving) bijections.

    Returns (distance, minimising Assignment); ties are broken towards the
    lexicographically smallest mapping array.
    """
    _check_same_order(g, h)
    if g.n > cap:
        raise CapExceededError(f"brute force capped at n={cap}, got n={g.n}")

    weighted = g.is_weighted or h.is_weighted
    best = None
    if not weighted:
        # Bitmask adjacency rows make the inner loop cheap.
        h_rows = [0] * h.n
        for u, v in h.edges:
            h_rows[u] |= 1 << v
            h_rows[v] |= 1 << u
        g_adj = g.adj
        for mapping in _all_bijections(g, h):
            diff = 0
            for u in range(g.n):
                row = 0
                for w in g_adj[u]:
                    row |= 1 << mapping[w]
                diff += bin(row ^ h_rows[mapping[u]]).count("1")
            cost = Fraction(diff // 2)
            if best is None or (cost, mapping) < best:
                best = (cost, mapping)
    else:
        for mapping in _all_bijections(g, h):
            pi = Assignment(mapping)
            cost = edit_cost(g, h, pi)
            if best is None or (cost, mapping) < best:
                best = (cost, mapping)
    if best is None:
        raise ValueError("no admissible bijection exists")
    return best[0], Assignment(best[1])


def is_isomorphic_bruteforce(g: Graph, h: Graph):
    """Exhaustive (backtracking) isomorphism search.

    Returns a colour-preserving isomorphism as an Assignment, or None.
    The search is complete: a None answer certifies non-isomorphism.
    """
    _check_same_order(g, h)
    if g.is_weighted or h.is_weighted:
        raise ValueError("isomorphism search is for unweighted graphs")
    if g.n == 0:
        return Assignment(())
    if len(g.edges) != len(h.edges):
        return None
    g_classes = g.colour_classes()
    h_classes = h.colour_classes()
    if sorted(g_classes) != sorted(h_classes) or any(
        len(g_classes[c]) != len(h_classes[c]) for c in g_classes
    ):
        return None

    g_deg = [len(g.adj[v]) for v in range(g.n)]
    h_deg = [len(h.adj[v]) for v in range(h.n)]
    candidates = [
        [w for w in h_classes[g.colour_of(v)] if h_deg[w] == g_deg[v]]
        for v in range(g.n)
    ]
    if any(not c for c in candidates):
        return None

    # Assign vertices in BFS order from the most constrained one so that
    # adjacency mismatches prune early.
    start = min(range(g.n), key=lambda v: len(candidates[v])) if g.n else 0
    order = []
    seen = set()
    queue = [start]
    while queue or len(order) < g.n:
        if not queue:
            rest = min(v for v in range(g.n) if v not in seen)
            queue.append(rest)
        v = queue.pop(0)
        if v in seen:
            continue
        seen.add(v)
        order.append(v)
        queue.extend(sorted(g.adj[v] - seen))

    mapping = [-1] * g.n
    used = [False] * h.n
    g_adj, h_adj = g.adj, h.adj

    def backtrack(i):
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for u in g_adj[v]:
                mu = mapping[u]
                if mu >= 0 and mu not in h_adj[w]:
                    ok = False
                    break
            if ok:
                # mapped non-neighbours must stay non-neighbours
                for u in range(g.n):
                    mu = mapping[u]
                    if mu >= 0 and u not in g_adj[v] and u != v and mu in h_adj[w]:
                        ok = False
                        break
            if not ok:
                continue
            mapping[v] = w
            used[w] = True
            if backtrack(i + 1):
                return True
            mapping[v] = -1
            used[w] = False
        return False

    if backtrack(0):
        return Assignment(tuple(mapping))
    return None


def mixed_neighbourhood(g: Graph, v: int, w: int) -> frozenset:
    """Symmetric difference of the neighbourhoods of v and w."""
    return g.neighbourhood(v) ^ g.neighbourhood(w)


def threshold_graph(g: Graph, t) -> Graph:
    """Unweighted graph keeping exactly the edges of weight > t.

    An unweighted input is treated as having all weights equal to 1.
    """
    t = as_fraction(t)
    kept = frozenset(e for e in g.edges if g.weight(*e) > t)
    return Graph(g.n, kept, weights=None, colours=g.colours)


def blowup(g: Graph, ell: int) -> Graph:
    """Replace every vertex by ell layered copies and every edge by K_{ell,ell}.

    Copy (v, i) gets id v*ell + i (layers i = 0..ell-1) and colour
    colour(v)*ell + i, which encodes the (base colour, layer) pair injectively.
    Edge weights, if present, are inherited from the base edge.
    """
    if ell < 1:
        raise ValueError("blowup factor must be >= 1")
    edges = set()
    weights = {} if g.is_weighted else None
    for u, v in g.edges:
        for i in range(ell):
            for j in range(ell):
                e = _norm_edge(u * ell + i, v * ell + j)
                edges.add(e)
                if weights is not None:
                    weights[e] = g.weight(u, v)
    colours = {
        v * ell + i: g.colour_of(v) * ell + i
        for v in range(g.n)
        for i in range(ell)
    }
    return Graph(g.n * ell, frozenset(edges), weights=weights, colours=colours)


def parse_graph(text: str) -> Graph:
    """Parse the line-based graph format (see serialize_graph)."""
    n = None
    edges = set()
    weights = {}
    any_weight = False
    colours = {}
    any_colour = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "n":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(tokens) != 2:
                raise ParseError("header must be 'n <count>'", lineno)
            try:
                n = int(tokens[1])
            except ValueError:
                raise ParseError(f"invalid vertex count {tokens[1]!r}", lineno)
            if n < 0:
                raise ParseError("vertex count must be non-negative", lineno)
        elif kind == "e":
            if n is None:
                raise ParseError("edge line before header", lineno)
            if len(tokens) not in (3, 4):
                raise ParseError("edge line must be 'e <u> <v> [weight]'", lineno)
            try:
                u, v = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise ParseError("invalid edge endpoints", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex index out of range in edge {u} {v}", lineno)
            e = _norm_edge(u, v)
            if e in edges:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            edges.add(e)
            if len(tokens) == 4:
                try:
                    w = as_fraction(tokens[3])
                except ValueError:
                    raise ParseError(f"invalid weight {tokens[3]!r}", lineno)
                if w == 0:
                    raise ParseError("edge weight must be nonzero", lineno)
                weights[e] = w
                any_weight = True
        elif kind == "c":
            if n is None:
                raise ParseError("colour line before header", lineno)
            if len(tokens) != 3:
                raise ParseError("colour line must be 'c <v> <colour>'", lineno)
            try:
                v, c = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise ParseError("invalid colour line", lineno)
            if not 0 <= v < n:
                raise ParseError(f"vertex index {v} out of range", lineno)
            if c < 0:
                raise ParseError("colour must be non-negative", lineno)
            if v in colours:
                raise ParseError(f"duplicate colour for vertex {v}", lineno)
            colours[v] = c
            any_colour = True
        else:
            raise ParseError(f"unknown line kind {kind!r}", lineno)
    if n is None:
        raise ParseError("missing header line 'n <count>'")
    return Graph(
        n,
        frozenset(edges),
        weights=weights if any_weight else None,
        colours=colours if any_colour else None,
    )


def serialize_graph(g: Graph) -> str:
    """Serialize to the line-based format; parse(serialize(g)) == g."""
    lines = [f"n {g.n}"]
    if g.is_coloured:
        for v in range(g.n):
            lines.append(f"c {v} {g.colour_of(v)}")
    for u, v in sorted(g.edges):
        if g.is_weighted:
            lines.append(f"e {u} {v} {format_rational(g.weights[(u, v)])}")
        else:
            lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"
