"""Weisfeiler-Leman refinement, homogenising sets and robust isomorphism.

Colour ids are canonical across graphs refined in the same run: each round
collects the signatures of every tuple of every participating graph, sorts
them globally and renames to dense integers, so histograms are directly
comparable without hashing.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, VerificationError
from .graphs import Graph, mixed_neighbourhood
from .rationals import as_fraction
from .setsystems import epsilon_net_greedy, mixed_system, vc_dimension_exact

DEFAULT_WL_BUDGET = 1_000_000


@dataclass(frozen=True)
class StableColouring:
    """Fixed point of k-WL refinement on one graph.

    `colours[i]` is the colour of the k-tuple with base-n encoding i (most
    significant digit first); for k = 1 the index is the vertex itself.
    `rounds` is the number of strictly refining iterations.
    """

    k: int
    n: int
    colours: tuple
    histogram: dict
    rounds: int

    def colour_of(self, vertices) -> int:
        idx = 0
        for v in vertices:
            idx = idx * self.n + v
        return self.colours[idx]

    def num_classes(self) -> int:
        return len(self.histogram)

    def vertex_partition(self) -> dict:
        """Vertices grouped by colour (k = 1 only)."""
        if self.k != 1:
            raise ValueError("vertex partition is defined for k = 1")
        classes = {}
        for v, c in enumerate(self.colours):
            classes.setdefault(c, []).append(v)
        return classes


def _histogram(colours) -> dict:
    hist = {}
    for c in colours:
        hist[c] = hist.get(c, 0) + 1
    return hist


def _canonical(rounds_sigs):
    """Rename signature lists (one per graph) to dense shared integer ids."""
    table = {}
    for sigs in rounds_sigs:
        for s in sigs:
            table[s] = None
    for rank, s in enumerate(sorted(table)):
        table[s] = rank
    return [[table[s] for s in sigs] for sigs in rounds_sigs]


def _joint_refine_1wl(graphs, individualised):
    """Joint 1-WL; returns (colour arrays, rounds to stability)."""
    initial = []
    for g, ind in zip(graphs, individualised):
        ind_sorted = sorted(ind)
        for v in ind_sorted:
            if not 0 <= v < g.n:
                raise ValueError(f"individualised vertex {v} out of range")
        rank = {v: i + 1 for i, v in enumerate(ind_sorted)}
        initial.append(
            [(g.colour_of(v), rank.get(v, 0)) for v in range(g.n)]
        )
    cols = _canonical(initial)
    rounds = 0
    while True:
        sigs = []
        for g, col in zip(graphs, cols):
            adj = g.adj
            sigs.append(
                [
                    (col[v], tuple(sorted(col[u] for u in adj[v])))
                    for v in range(g.n)
                ]
            )
        new_cols = _canonical(sigs)
        old_classes = len({c for col in cols for c in col})
        new_classes = len({c for col in new_cols for c in col})
        if new_classes == old_classes:
            return cols, rounds
        cols = new_cols
        rounds += 1


def _atomic_type(g: Graph, tup):
    k = len(tup)
    eq = tuple(tup[i] == tup[j] for i in range(k) for j in range(k))
    adj = tuple(
        tup[i] != tup[j] and g.has_edge(tup[i], tup[j])
        for i in range(k)
        for j in range(k)
    )
    colours = tuple(g.colour_of(v) for v in tup)
    return (eq, adj, colours)


def _joint_refine_kwl(graphs, k, budget):
    """Joint k-WL over all k-tuples; returns (colour arrays, rounds)."""
    for g in graphs:
        if g.n**k > budget:
            raise BudgetExceededError(
                f"{k}-WL needs {g.n**k} tuples, budget is {budget}", attempted=k
            )
    n_list = [g.n for g in graphs]
    sizes = [n**k for n in n_list]
    initial = []
    for g, n, size in zip(graphs, n_list, sizes):
        sigs = []
        for idx in range(size):
            rem = idx
            tup = [0] * k
            for pos in range(k - 1, -1, -1):
                tup[pos] = rem % n
                rem //= n
            sigs.append(_atomic_type(g, tuple(tup)))
        initial.append(sigs)
    cols = _canonical(initial)
    rounds = 0
    while True:
        sigs = []
        for g, n, size, col in zip(graphs, n_list, sizes, cols):
            powers = [n ** (k - 1 - pos) for pos in range(k)]
            graph_sigs = []
            for idx in range(size):
                digits = [(idx // powers[pos]) % n for pos in range(k)]
                bases = [idx - digits[pos] * powers[pos] for pos in range(k)]
                ms = sorted(
                    tuple(col[bases[pos] + w * powers[pos]] for pos in range(k))
                    for w in range(n)
                )
                graph_sigs.append((col[idx], tuple(ms)))
            sigs.append(graph_sigs)
        new_cols = _canonical(sigs)
        old_classes = len({c for col in cols for c in col})
        new_classes = len({c for col in new_cols for c in col})
        if new_classes == old_classes:
            return cols, rounds
        cols = new_cols
        rounds += 1


def colour_refinement(g: Graph, individualised=()) -> StableColouring:
    """1-WL fixed point of g with the given vertices individualised.

    Individualised vertices receive unique initial colours (their rank in
    sorted order); pre-existing vertex colours join the initial signature.
    """
    cols, rounds = _joint_refine_1wl([g], [tuple(individualised)])
    colours = tuple(cols[0])
    return StableColouring(1, g.n, colours, _histogram(colours), rounds)


def k_wl_stable(g: Graph, k: int, budget: int = DEFAULT_WL_BUDGET) -> StableColouring:
    """The k-stable colouring of all k-tuples of g."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return colour_refinement(g)
    cols, rounds = _joint_refine_kwl([g], k, budget)
    colours = tuple(cols[0])
    return StableColouring(k, g.n, colours, _histogram(colours), rounds)


@dataclass(frozen=True)
class WlComparison:
    distinguishes: bool
    distinguishing_colour: int | None
    histogram_g: dict
    histogram_h: dict
    k: int

    def digest(self) -> str:
        payload = json.dumps(
            [sorted(self.histogram_g.items()), sorted(self.histogram_h.items())],
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def wl_compare(g: Graph, h: Graph, k: int, budget: int = DEFAULT_WL_BUDGET) -> WlComparison:
    """Joint k-WL run on two graphs with shared canonical colour ids."""
    if g.n != h.n:
        raise ValueError("graphs have different orders")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        cols, _ = _joint_refine_1wl([g, h], [(), ()])
    else:
        cols, _ = _joint_refine_kwl([g, h], k, budget)
    hist_g = _histogram(cols[0])
    hist_h = _histogram(cols[1])
    witness = None
    for c in sorted(set(hist_g) | set(hist_h)):
        if hist_g.get(c, 0) != hist_h.get(c, 0):
            witness = c
            break
    return WlComparison(witness is not None, witness, hist_g, hist_h, k)


def wl_distinguishes(g: Graph, h: Graph, k: int, budget: int = DEFAULT_WL_BUDGET) -> bool:
    """True iff some canonical colour has different multiplicity in the two
    k-stable colourings (computed jointly)."""
    return wl_compare(g, h, k, budget).distinguishes


def is_homogenising(g: Graph, vertices, eps) -> bool:
    """Check: vertices equal under 1-WL with `vertices` individualised have
    mixed neighbourhoods of size at most eps * n."""
    eps = as_fraction(eps)
    gamma = colour_refinement(g, vertices)
    limit = eps * g.n
    classes = gamma.vertex_partition()
    for members in classes.values():
        for i, v in enumerate(members):
            for w in members[i + 1 :]:
                if len(mixed_neighbourhood(g, v, w)) > limit:
                    return False
    return True


@dataclass(frozen=True)
class HomogenisingSet:
    vertices: tuple
    eps: Fraction
    method: str
    class_counts: tuple = ()  # gamma classes per greedy iteration
    size_target: float | None = None  # (d/eps) log(1/eps), constant not asserted


def homogenising_set_net(g: Graph, eps) -> HomogenisingSet:
    """An eps-net for the mixed-neighbourhood system, hence eps-homogenising.

    The greedy net size is reported against the dimension-based target
    (d / eps) * log(1/eps), where d is the exact VC dimension of the mixed
    system; the target's hidden constant is informational only.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    system = mixed_system(g)
    net = epsilon_net_greedy(system, min(eps, Fraction(1)))
    d = max(vc_dimension_exact(system), 0)
    target = d / float(eps) * max(1.0, math.log(1 / float(eps)))
    result = HomogenisingSet(tuple(net), eps, "net", size_target=target)
    if not is_homogenising(g, result.vertices, eps):
        raise VerificationError("net-based set failed the homogenising check")
    return result


def homogenising_set_coloured(g: Graph, eps) -> HomogenisingSet:
    """Greedy individualisation until no colour-equal pair has a large mixed
    neighbourhood; the loop adds the second vertex of the lexicographically
    smallest violating pair.  |S| <= (s-1)/eps with s the largest input
    colour class."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not g.is_coloured:
        raise ValueError("requires a coloured graph")
    limit = eps * g.n
    s = max(len(c) for c in g.colour_classes().values()) if g.n else 1
    bound = Fraction(s - 1) / eps

    chosen = []
    counts = []
    while True:
        gamma = colour_refinement(g, chosen)
        counts.append(gamma.num_classes())
        violation = None
        for members in gamma.vertex_partition().values():
            for i, v in enumerate(members):
                for w in members[i + 1 :]:
                    if len(mixed_neighbourhood(g, v, w)) > limit:
                        pair = (v, w)
                        if violation is None or pair < violation:
                            violation = pair
        if violation is None:
            break
        if len(chosen) >= g.n:
            raise VerificationError("greedy homogenising loop failed to terminate")
        chosen.append(violation[1])
    if len(chosen) > bound:
        raise VerificationError(
            f"greedy set of size {len(chosen)} exceeds the (s-1)/eps bound {bound}"
        )
    return HomogenisingSet(
        tuple(sorted(chosen)), eps, "coloured-greedy", tuple(counts)
    )


@dataclass(frozen=True)
class GiCertificate:
    answer: str  # "isomorphic" | "far"
    eps: Fraction
    strategy: str
    s_vertices: tuple
    k: int
    distinguishing_colour: int | None
    histograms_digest: str


def robust_gi(
    g: Graph,
    h: Graph,
    eps,
    strategy: str = "net",
    budget: int = DEFAULT_WL_BUDGET,
) -> GiCertificate:
    """Promise-problem test: isomorphic versus edit distance >= eps * n^2.

    Computes an (eps/3)-homogenising set S in g and answers Far exactly when
    (|S|+1)-WL distinguishes the graphs.  Unconditionally, Far implies the
    graphs are non-isomorphic and Isomorphic implies edit distance at most
    eps * n^2.
    """
    if g.n != h.n:
        raise ValueError("graphs have different orders")
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    eps_hom = eps / 3
    if strategy == "net":
        hom = homogenising_set_net(g, eps_hom)
    elif strategy in ("coloured", "coloured-greedy"):
        hom = homogenising_set_coloured(g, eps_hom)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    k = len(hom.vertices) + 1
    comparison = wl_compare(g, h, k, budget)
    return GiCertificate(
        answer="far" if comparison.distinguishes else "isomorphic",
        eps=eps,
        strategy=hom.method,
        s_vertices=hom.vertices,
        k=k,
        distinguishing_colour=comparison.distinguishing_colour,
        histograms_digest=comparison.digest(),
    )
