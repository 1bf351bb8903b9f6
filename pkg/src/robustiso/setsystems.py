"""Set systems, exact VC dimension, epsilon-nets and epsilon-approximations.

Members of a set system are stored as integer bitmasks over the ground set
{0, ..., ground_size-1}; the family is deduplicated by construction.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, CapExceededError, VerificationError
from .graphs import Graph
from .rationals import as_fraction


@dataclass(frozen=True)
class SetSystem:
    ground_size: int
    sets: frozenset  # frozenset of int bitmasks

    def __post_init__(self):
        if self.ground_size < 0:
            raise ValueError("ground size must be non-negative")
        full = (1 << self.ground_size) - 1
        for m in self.sets:
            if m & ~full:
                raise ValueError("set member exceeds the ground set")
        object.__setattr__(self, "sets", frozenset(self.sets))

    @classmethod
    def from_iterables(cls, ground_size: int, families) -> "SetSystem":
        masks = set()
        for member in families:
            m = 0
            for x in member:
                if not 0 <= x < ground_size:
                    raise ValueError(f"element {x} outside ground set")
                m |= 1 << x
            masks.add(m)
        return cls(ground_size, frozenset(masks))

    def members(self):
        """Members decoded as sorted tuples of elements."""
        return sorted(
            tuple(i for i in range(self.ground_size) if m >> i & 1)
            for m in self.sets
        )

    def __len__(self):
        return len(self.sets)


def _mask_of(subset, ground_size: int) -> int:
    m = 0
    for x in subset:
        if not 0 <= x < ground_size:
            raise ValueError(f"element {x} outside ground set")
        m |= 1 << x
    return m


def neighbourhood_system(g: Graph) -> SetSystem:
    """The family of vertex neighbourhoods, deduplicated."""
    return SetSystem.from_iterables(g.n, (g.adj[v] for v in range(g.n)))


def mixed_system(g: Graph) -> SetSystem:
    """All pairwise symmetric differences of neighbourhoods (incl. the empty set)."""
    masks = set()
    rows = []
    for v in range(g.n):
        m = 0
        for w in g.adj[v]:
            m |= 1 << w
        rows.append(m)
    for v in range(g.n):
        for w in range(v, g.n):
            masks.add(rows[v] ^ rows[w])
    if g.n == 0:
        masks.add(0)
    return SetSystem(g.n, frozenset(masks))


def qap_threshold_system(q, t, phi=None) -> SetSystem:
    """Threshold hypothesis system of a QAP instance.

    Without phi the ground set is [n] x [n] (pair (w,w') encoded as w*n+w')
    and the member for (v,v') collects the pairs with coefficient > t.  With
    phi the ground set is the graph of phi, encoded by its source w.
    """
    t = as_fraction(t)
    n = q.n
    masks = set()
    if phi is None:
        for v in range(n):
            for vp in range(n):
                m = 0
                for w in range(n):
                    for wp in range(n):
                        if q.c(v, vp, w, wp) > t:
                            m |= 1 << (w * n + wp)
                masks.add(m)
        return SetSystem(n * n, frozenset(masks))
    for v in range(n):
        for vp in range(n):
            m = 0
            for w in range(n):
                if q.c(v, vp, w, phi[w]) > t:
                    m |= 1 << w
            masks.add(m)
    return SetSystem(n, frozenset(masks))


def is_shattered(system: SetSystem, subset) -> bool:
    """True iff every subset of `subset` occurs as a trace H & subset."""
    x = _mask_of(subset, system.ground_size)
    want = 1 << bin(x).count("1")
    traces = set()
    for m in system.sets:
        traces.add(m & x)
        if len(traces) == want:
            return True
    return len(traces) == want


def vc_dimension_exact(system: SetSystem, size_cap: int = 20) -> int:
    """Largest cardinality of a shattered subset; -1 for the empty family.

    Exhaustive search over shatterable prefixes: shattering is closed under
    subsets, so depth-first extension by increasing element index visits
    every shattered set exactly once and prunes failed extensions.  A set X
    is tracked as the partition of the family by trace on X (bitmasks over
    family indices); adding x keeps X shattered iff x splits every class.
    Elements indistinguishable by family membership are collapsed first.
    """
    family = list(system.sets)
    if not family:
        return -1
    nf = len(family)
    full_sig = (1 << nf) - 1

    # membership signature per element; one representative per signature
    seen_sigs = set()
    sigs = []
    for x in range(system.ground_size):
        bit = 1 << x
        sig = 0
        for i, m in enumerate(family):
            if m & bit:
                sig |= 1 << i
        if sig not in seen_sigs:
            seen_sigs.add(sig)
            # a useful element occurs in some member and misses some member
            if sig != 0 and sig != full_sig:
                sigs.append(sig)

    best = 0

    def extend(groups, size: int, start: int):
        nonlocal best
        if size > best:
            best = size
        if size >= size_cap:
            raise CapExceededError(
                f"shattered set reached the size cap {size_cap}; VC unresolved"
            )
        if 1 << (size + 1) > nf:
            return
        for idx in range(start, len(sigs)):
            sig = sigs[idx]
            split = []
            for grp in groups:
                inside = grp & sig
                if inside == 0 or inside == grp:
                    split = None
                    break
                split.append(inside)
                split.append(grp & ~sig)
            if split is not None:
                extend(split, size + 1, idx + 1)

    extend([full_sig], 0, 0)
    return best


def weighted_graph_vc(g: Graph, size_cap: int = 20) -> int:
    """Max VC dimension of the threshold neighbourhood systems of (G, w).

    Thresholds: the distinct effective edge weights plus one sentinel below
    the minimum (at most |E|+1 distinct threshold graphs arise).
    """
    from .graphs import threshold_graph

    weights = sorted({g.weight(*e) for e in g.edges})
    thresholds = [(weights[0] - 1) if weights else Fraction(0)] + weights
    best = 0
    for t in thresholds:
        sub = threshold_graph(g, t)
        best = max(best, vc_dimension_exact(neighbourhood_system(sub), size_cap))
    return best


def weak_vc_test(q, d: int, budget: int = 10_000_000) -> bool:
    """Decide whether every restricted threshold system has VC dimension <= d.

    For each candidate threshold and each injective partial map of size d+1,
    checks that some sub-map is realised as a trace by no pair (v,v').  The
    thresholds are the distinct coefficient values plus a sentinel below the
    minimum.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    n = q.n
    values = sorted(q.value_set())
    thresholds = ([values[0] - 1] if values else [Fraction(0)]) + values

    size = d + 1
    if size > n:
        return True
    num_alphas = math.comb(n, size) * math.perm(n, size)
    work = len(thresholds) * num_alphas
    if work > budget:
        raise BudgetExceededError(
            f"weak VC test needs {work} (threshold, alpha) combinations", work
        )

    full = (1 << size) - 1
    for sources in itertools.combinations(range(n), size):
        for targets in itertools.permutations(range(n), size):
            alpha = tuple(zip(sources, targets))
            for t in thresholds:
                traces = set()
                for v in range(n):
                    for vp in range(n):
                        m = 0
                        for i, (w, wp) in enumerate(alpha):
                            if q.c(v, vp, w, wp) > t:
                                m |= 1 << i
                        traces.add(m)
                        if len(traces) == full + 1:
                            return False
    return True


def epsilon_net_greedy(system: SetSystem, eps) -> tuple:
    """Greedy hitting set for all members larger than eps * ground_size.

    The returned set hits every such member; greedy max-coverage keeps it
    within ceil(ln|H| / eps) picks (one pick when the family is a single
    large set, where that bound degenerates to zero).
    """
    eps = as_fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    threshold = eps * system.ground_size
    targets = [m for m in system.sets if bin(m).count("1") > threshold]
    net = []
    while targets:
        best_x, best_hits = -1, -1
        for x in range(system.ground_size):
            bit = 1 << x
            hits = sum(1 for m in targets if m & bit)
            if hits > best_hits:
                best_x, best_hits = x, hits
        net.append(best_x)
        bit = 1 << best_x
        targets = [m for m in targets if not m & bit]
    if len(system) > 0:
        bound = max(math.ceil(math.log(len(system)) / float(eps)), 1 if net else 0)
        if len(net) > bound:
            raise VerificationError(
                f"greedy net of size {len(net)} exceeds bound {bound}"
            )
    return tuple(sorted(net))


def verify_epsilon_approximation(system: SetSystem, sample, eps) -> bool:
    """Exact check of the approximation property for a multiset sample."""
    eps = as_fraction(eps)
    n = system.ground_size
    size = len(sample)
    slack = eps * n
    for m in system.sets:
        inside = sum(1 for x in sample if m >> x & 1)
        actual = Fraction(bin(m).count("1"))
        if size == 0:
            estimate = Fraction(0)
        else:
            estimate = Fraction(n, size) * inside
        if not (estimate - slack <= actual <= estimate + slack):
            return False
    return True


def epsilon_approximation_sample(
    system: SetSystem,
    eps,
    gamma,
    seed: int,
    d: int | None = None,
    c_approx=1,
    retries: int = 8,
) -> tuple:
    """Uniform-with-replacement sample verified to be an eps-approximation.

    Draws ceil(c_approx * eps^-2 * (d + ln(1/gamma))) elements, checks the
    approximation property exactly against every family member, and redraws
    up to `retries` extra times before giving up.  Returns the sample as a
    sorted multiset tuple.
    """
    eps = as_fraction(eps)
    gamma = as_fraction(gamma)
    if not (0 < eps < 1 and 0 < gamma < 1):
        raise ValueError("eps and gamma must lie in (0, 1)")
    c_approx = as_fraction(c_approx)
    if c_approx <= 0:
        raise ValueError("c_approx must be positive")
    if d is None:
        d = max(vc_dimension_exact(system), 0)
    size = math.ceil(
        float(c_approx) * (d + math.log(1 / float(gamma))) / float(eps) ** 2
    )
    size = max(size, 1)
    if system.ground_size == 0:
        return ()
    rng = random.Random(seed)
    for _ in range(retries + 1):
        sample = tuple(
            sorted(rng.randrange(system.ground_size) for _ in range(size))
        )
        if verify_epsilon_approximation(system, sample, eps):
            return sample
    raise VerificationError(
        f"no verified eps-approximation after {retries + 1} draws "
        "(consider a larger c_approx)"
    )


def sauer_shelah_check(system: SetSystem, s: int, budget: int = 2_000_000) -> bool:
    """Check the trace-count bound (e*s/d)^d over every s-subset of the ground set.

    Must return True for every valid input; a False return flags a bug in the
    VC machinery.  Exposed for the test harness.
    """
    d = vc_dimension_exact(system)
    if d < 1:
        raise ValueError("requires a system of VC dimension >= 1")
    if s < d:
        raise ValueError("requires s >= VC dimension")
    if math.comb(system.ground_size, s) > budget:
        raise BudgetExceededError("too many s-subsets to enumerate")
    bound = (math.e * s / d) ** d
    family = list(system.sets)
    for combo in itertools.combinations(range(system.ground_size), s):
        x = 0
        for e in combo:
            x |= 1 << e
        traces = {m & x for m in family}
        if len(traces) > bound:
            return False
    return True
