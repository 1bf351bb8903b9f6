"""The additive-approximation pipeline for bounded-weight QAP instances.

For each candidate partial injection alpha, a linear program over the
assignment polytope constrains every linearised coefficient row to an
interval around the scaled partial-sum estimate b_alpha; its fractional
optimum is rounded to a partial matching which is then completed greedily.
The best completed assignment over all alphas (by true QAP cost) wins.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog as _scipy_linprog

from .errors import BudgetExceededError
from .graphs import Assignment, Graph, PartialInjection, edit_cost
from .qap import QapInstance, b_alpha, ged_to_qap, qap_cost, weighted_ged_to_qap
from .rationals import as_fraction
from . import simplex


@dataclass(frozen=True)
class LinearProgram:
    """Interval-constrained assignment LP for one alpha.

    Variables are x(v, v') indexed v*n + v'.  The assignment equalities
    (unit row and column sums, nonnegativity) are always part of the
    program; `rows` adds, per pair (v, v'), the coefficient vector a(v,v')
    with the two-sided bound lo <= a . x <= hi.
    """

    n: int
    objective: tuple  # length n^2 of Fractions (the b_alpha values)
    rows: tuple  # entries ((v, v'), coeffs tuple of length n^2, lo, hi)


@dataclass(frozen=True)
class FractionalSolution:
    values: dict  # (v, v') -> Fraction
    objective_value: Fraction


@dataclass(frozen=True)
class Infeasible:
    """Normal (non-error) outcome of solve_lp on an infeasible program."""


@dataclass(frozen=True)
class ApproxReport:
    best_assignment: Assignment
    best_cost: Fraction
    alphas_tried: int
    lps_infeasible: int
    eps: Fraction
    m: int
    mode: str
    seed: int
    trace: tuple = ()


def m_bound(b, eps, d: int, k_values: int, c_m=1, n: int | None = None) -> int:
    """Sample-size bound ceil(c_m * B^2 eps^-2 (d + ln K)), clamped to [1, n]."""
    b = as_fraction(b)
    eps = as_fraction(eps)
    c_m = as_fraction(c_m)
    if b <= 0 or eps <= 0 or d < 0 or k_values < 1 or c_m <= 0:
        raise ValueError("m_bound requires positive B, eps, c_m and K >= 1, d >= 0")
    raw = float(c_m) * float(b) ** 2 * (d + math.log(k_values)) / float(eps) ** 2
    m = max(1, math.ceil(raw))
    if n is not None:
        m = min(m, n)
    return m


def build_alpha_lp(q: QapInstance, alpha: PartialInjection, eps) -> LinearProgram:
    """LP: minimise sum b_alpha(v,v') x(v,v') with a(v,v') . x in [b +- eps*n/3]."""
    if len(alpha) == 0:
        raise ValueError("alpha must be nonempty")
    eps = as_fraction(eps)
    n = q.n
    slack = eps * n / 3
    objective = []
    rows = []
    for v in range(n):
        for vp in range(n):
            b = b_alpha(q, alpha, v, vp)
            objective.append(b)
            coeffs = tuple(
                q.c(v, vp, w, wp) for w in range(n) for wp in range(n)
            )
            rows.append(((v, vp), coeffs, b - slack, b + slack))
    return LinearProgram(n, tuple(objective), tuple(rows))


def _assignment_equalities(n: int):
    a_eq, b_eq = [], []
    for v in range(n):
        row = [Fraction(0)] * (n * n)
        for vp in range(n):
            row[v * n + vp] = Fraction(1)
        a_eq.append(row)
        b_eq.append(Fraction(1))
    for vp in range(n):
        row = [Fraction(0)] * (n * n)
        for v in range(n):
            row[v * n + vp] = Fraction(1)
        a_eq.append(row)
        b_eq.append(Fraction(1))
    return a_eq, b_eq


def solve_lp(lp: LinearProgram, method: str = "exact"):
    """Solve to optimality, returning FractionalSolution or Infeasible.

    "exact" runs the rational simplex (deterministic Bland pivoting, zero
    tolerance).  "highs" delegates to scipy's HiGHS for speed; its solution
    is converted back to exact rationals as-is.
    """
    n = lp.n
    if method == "exact":
        a_eq, b_eq = _assignment_equalities(n)
        a_ub, b_ub = [], []
        for _, coeffs, lo, hi in lp.rows:
            a_ub.append(list(coeffs))
            b_ub.append(hi)
            a_ub.append([-c for c in coeffs])
            b_ub.append(-lo)
        status, x, value = simplex.simplex_min(
            list(lp.objective), a_ub, b_ub, a_eq, b_eq
        )
        if status == simplex.INFEASIBLE:
            return Infeasible()
        values = {
            (v, vp): x[v * n + vp] for v in range(n) for vp in range(n)
        }
        return FractionalSolution(values, value)
    if method == "highs":
        nv = n * n
        a_eq = np.zeros((2 * n, nv))
        for v in range(n):
            a_eq[v, v * n : (v + 1) * n] = 1.0
        for vp in range(n):
            a_eq[n + vp, vp::n] = 1.0
        b_eq = np.ones(2 * n)
        a_ub = np.zeros((2 * len(lp.rows), nv))
        b_ub = np.zeros(2 * len(lp.rows))
        for i, (_, coeffs, lo, hi) in enumerate(lp.rows):
            row = np.array([float(c) for c in coeffs])
            a_ub[2 * i] = row
            b_ub[2 * i] = float(hi)
            a_ub[2 * i + 1] = -row
            b_ub[2 * i + 1] = -float(lo)
        res = _scipy_linprog(
            [float(c) for c in lp.objective],
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=(0, None),
            method="highs",
        )
        if res.status == 2:
            return Infeasible()
        if res.status != 0:
            raise RuntimeError(f"LP solver failed with status {res.status}")
        values = {}
        for v in range(n):
            for vp in range(n):
                values[(v, vp)] = max(Fraction(float(res.x[v * n + vp])), Fraction(0))
        return FractionalSolution(values, Fraction(float(res.fun)))
    raise ValueError(f"unknown LP method {method!r}")


def round_apec(
    frac: FractionalSolution, lp: LinearProgram, seed: int, retries: int = 32
) -> PartialInjection:
    """Seeded randomised rounding of a fractional assignment to a partial matching.

    Each retry draws targets source by source with probability proportional
    to the remaining fractional mass, dropping draws below the mass floor
    1/(2n).  Among all retries the result with the most matched pairs wins,
    ties broken by smaller LP objective, then lexicographically.
    """
    n = lp.n
    floor = Fraction(1, 2 * n)
    rng = random.Random(seed)
    objective = {
        (v, vp): lp.objective[v * n + vp] for v in range(n) for vp in range(n)
    }
    best = None
    for _ in range(max(1, retries)):
        used = set()
        pairs = []
        for v in range(n):
            options = []
            weights = []
            for vp in range(n):
                if vp in used:
                    continue
                x = frac.values.get((v, vp), Fraction(0))
                if x > 0:
                    options.append(vp)
                    weights.append(float(x))
            if not options:
                continue
            vp = rng.choices(options, weights=weights)[0]
            if frac.values[(v, vp)] < floor:
                continue
            pairs.append((v, vp))
            used.add(vp)
        obj = sum((objective[p] for p in pairs), Fraction(0))
        key = (-len(pairs), obj, tuple(pairs))
        if best is None or key < best:
            best = key
    return PartialInjection(frozenset(best[2]))


def complete_matching(partial: PartialInjection, n: int) -> Assignment:
    """Extend to a perfect matching: unmatched sources take the smallest free target."""
    mapping = [-1] * n
    used = set()
    for v, vp in partial:
        if v >= n or vp >= n:
            raise ValueError("partial injection exceeds the ground set")
        mapping[v] = vp
        used.add(vp)
    free = iter(sorted(set(range(n)) - used))
    for v in range(n):
        if mapping[v] < 0:
            mapping[v] = next(free)
    return Assignment(tuple(mapping))


def _exhaustive_alphas(n: int, size: int):
    for sources in itertools.combinations(range(n), size):
        for targets in itertools.permutations(range(n), size):
            yield tuple(zip(sources, targets))


def _sampled_alphas(n: int, size: int, count: int, rng: random.Random):
    for _ in range(count):
        sources = sorted(rng.sample(range(n), size))
        targets = rng.sample(range(n), size)
        yield tuple(zip(sources, targets))


def approximate_qap(
    q: QapInstance,
    eps,
    m: int,
    seed: int,
    mode: str = "exhaustive",
    lp_method: str = "highs",
    rounding_retries: int = 32,
    samples_per_size: int = 64,
    alpha_budget: int = 200_000,
    keep_trace: bool = False,
) -> ApproxReport:
    """Best completed assignment over all partial injections of size 1..m.

    Exhaustive mode iterates every alpha of each size (the n^O(m) loop);
    sampled mode draws `samples_per_size` seeded alphas per size and carries
    no guarantee.  Identical arguments give identical reports.
    """
    eps = as_fraction(eps)
    if m < 1:
        raise ValueError("m must be >= 1")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    n = q.n
    nonnegative = all(val >= 0 for _, val in q.nonzero_entries())
    rng = random.Random(seed)

    best = None  # (cost, order index, assignment)
    tried = 0
    infeasible = 0
    trace = []
    done = False
    for size in range(1, min(m, n) + 1):
        if done:
            break
        if mode == "exhaustive":
            alphas = _exhaustive_alphas(n, size)
        else:
            alphas = _sampled_alphas(n, size, samples_per_size, rng)
        for pairs in alphas:
            if tried >= alpha_budget:
                raise BudgetExceededError(
                    f"alpha budget of {alpha_budget} exhausted", tried
                )
            tried += 1
            alpha = PartialInjection(frozenset(pairs))
            lp = build_alpha_lp(q, alpha, eps)
            sol = solve_lp(lp, method=lp_method)
            if isinstance(sol, Infeasible):
                infeasible += 1
                if keep_trace:
                    trace.append({"alpha": pairs, "status": "infeasible"})
                continue
            partial = round_apec(
                sol, lp, seed=seed * 1_000_003 + tried, retries=rounding_retries
            )
            assignment = complete_matching(partial, n)
            cost = qap_cost(q, assignment)
            if keep_trace:
                trace.append(
                    {"alpha": pairs, "status": "ok", "cost": cost,
                     "matched": len(partial)}
                )
            if best is None or cost < best[0]:
                best = (cost, tried, assignment)
            if nonnegative and best[0] == 0:
                done = True
                break

    if best is None:
        assignment = complete_matching(PartialInjection(frozenset()), n)
        best = (qap_cost(q, assignment), 0, assignment)
    return ApproxReport(
        best_assignment=best[2],
        best_cost=best[0],
        alphas_tried=tried,
        lps_infeasible=infeasible,
        eps=eps,
        m=m,
        mode=mode,
        seed=seed,
        trace=tuple(trace),
    )


@dataclass(frozen=True)
class GedApproxResult:
    assignment: Assignment
    cost: Fraction
    report: ApproxReport


def approximate_ged(
    g: Graph,
    h: Graph,
    eps,
    m: int,
    seed: int,
    mode: str = "exhaustive",
    lp_method: str = "highs",
    **kwargs,
) -> GedApproxResult:
    """Approximate edit distance via the QAP reduction.

    The QAP runs with doubled eps because its cost double-counts every edge,
    so the returned edit cost obeys the same eps * n^2 additive bound.
    """
    if g.n != h.n:
        raise ValueError("graphs have different orders")
    eps = as_fraction(eps)
    if g.is_weighted or h.is_weighted:
        q = weighted_ged_to_qap(g, h)
    else:
        q = ged_to_qap(g, h)
    report = approximate_qap(
        q, 2 * eps, m, seed, mode=mode, lp_method=lp_method, **kwargs
    )
    phi = report.best_assignment
    return GedApproxResult(phi, edit_cost(g, h, phi), report)
