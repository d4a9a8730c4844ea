"""Exact tracial arithmetic on block algebras and Rokhlin-type certificates.

A trace on a multimatrix algebra is a convex combination of the
per-block normalized traces, so it is a rational weight vector; a
projection is determined up to equivalence by its blockwise ranks.
Every certificate check below is an exact rational inequality: a
certificate passes only on exact comparison, never within a tolerance.

The operator-norm condition on compressions (|| p x p || close to 1)
that accompanies these towers analytically is not rank-expressible and
is deliberately outside certificate scope; reports carry a note saying
so rather than silently dropping it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .blocks import (
    Block,
    BlockAlgebra,
    CIRCLE,
    DirectSystem,
    MATRIX,
    MultiplicityMap,
    compose_maps,
    image_ranks_of_central_projection,
    relative_commutant,
)
from .fixed_point import (
    fixed_algebra,
    fixed_embedding_multiplicities,
    half_power_size,
    tensor_actions,
    w_unitary_spec,
)
from .reports import Check, Report

NORM_CONDITION_NOTE = (
    "operator-norm condition on compressions is analytic, not rank-checkable; "
    "outside certificate scope"
)


@dataclass(frozen=True)
class TraceVector:
    """Convex weights over the blocks of an algebra (one trace)."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if any(w < 0 for w in ws):
            raise ValueError("trace weights must be nonnegative")
        if sum(ws) != 1:
            raise ValueError("trace weights must sum to exactly 1")


@dataclass(frozen=True)
class ProjectionClass:
    """Blockwise ranks of a projection in a block algebra."""

    algebra: BlockAlgebra
    ranks: tuple[int, ...]

    def __post_init__(self):
        rk = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", rk)
        sizes = self.algebra.sizes
        if len(rk) != len(sizes):
            raise ValueError("one rank per block required")
        for r, s in zip(rk, sizes):
            if not 0 <= r <= s:
                raise ValueError(f"rank {r} out of range for block of size {s}")

    @staticmethod
    def unit(algebra: BlockAlgebra) -> "ProjectionClass":
        return ProjectionClass(algebra, algebra.sizes)

    @staticmethod
    def zero(algebra: BlockAlgebra) -> "ProjectionClass":
        return ProjectionClass(algebra, (0,) * algebra.num_blocks)

    def complement(self) -> "ProjectionClass":
        return ProjectionClass(
            self.algebra, tuple(s - r for r, s in zip(self.ranks, self.algebra.sizes))
        )

    def add(self, other: "ProjectionClass") -> "ProjectionClass":
        if other.algebra != self.algebra:
            raise ValueError("projections live in different algebras")
        return ProjectionClass(
            self.algebra, tuple(a + b for a, b in zip(self.ranks, other.ranks))
        )


def extreme_traces(algebra: BlockAlgebra) -> tuple[TraceVector, ...]:
    """Vertices of the trace simplex: the per-block normalized traces."""
    n = algebra.num_blocks
    return tuple(
        TraceVector(tuple(Fraction(int(i == j)) for j in range(n)))
        for i in range(n)
    )


def restriction_trace(algebra: BlockAlgebra, ambient_dim: int) -> TraceVector:
    """Trace induced on a unital multiplicity-one subalgebra of M_ambient."""
    return TraceVector(tuple(Fraction(s, ambient_dim) for s in algebra.sizes))


def trace_of(p: ProjectionClass, t: TraceVector) -> Fraction:
    """Exact value of the trace on the projection class."""
    sizes = p.algebra.sizes
    if len(t.weights) != len(sizes):
        raise ValueError("trace and projection have different block counts")
    return sum(
        (w * Fraction(r, s) for w, r, s in zip(t.weights, p.ranks, sizes)),
        start=Fraction(0),
    )


def tensor_trace_bound(lambdas) -> tuple[Fraction, Fraction, bool]:
    """(1 - prod, sum of (1 - lambda), lhs <= rhs) for lambdas in [0, 1].

    The inequality always holds; callers assert the returned flag.
    """
    ls = [Fraction(x) for x in lambdas]
    if any(x < 0 or x > 1 for x in ls):
        raise ValueError("tensor factors must lie in [0, 1]")
    prod = Fraction(1)
    for x in ls:
        prod *= x
    lhs = 1 - prod
    rhs = sum((1 - x for x in ls), start=Fraction(0))
    return lhs, rhs, lhs <= rhs


def comparison_le(p: ProjectionClass, q: ProjectionClass) -> bool:
    """Blockwise rank comparison (Cuntz subequivalence in a multimatrix algebra)."""
    if p.algebra != q.algebra:
        raise ValueError("projections live in different algebras")
    return all(a <= b for a, b in zip(p.ranks, q.ranks))


def strict_comparison_gap(p: ProjectionClass, bound, traces) -> bool:
    """Whether every listed extreme trace of p is strictly below the bound."""
    traces = tuple(traces)
    if not traces:
        raise ValueError("need at least one trace")
    b = Fraction(bound)
    return all(trace_of(p, t) < b for t in traces)


def tensor_algebra(a: BlockAlgebra, b: BlockAlgebra) -> BlockAlgebra:
    """Blockwise tensor product, a-major; circle x circle is rejected."""
    blocks = []
    for ba in a.blocks:
        for bb in b.blocks:
            if ba.kind == CIRCLE and bb.kind == CIRCLE:
                raise ValueError("tensor of two circle blocks leaves the class")
            kind = CIRCLE if CIRCLE in (ba.kind, bb.kind) else MATRIX
            blocks.append(Block(kind, ba.size * bb.size))
    return BlockAlgebra(tuple(blocks))


def tensor_power_algebra(a: BlockAlgebra, n: int) -> BlockAlgebra:
    out = a
    for _ in range(n - 1):
        out = tensor_algebra(out, a)
    return out


def tensor_projection(
    p: ProjectionClass, q: ProjectionClass, ambient: BlockAlgebra | None = None
) -> ProjectionClass:
    alg = ambient if ambient is not None else tensor_algebra(p.algebra, q.algebra)
    ranks = tuple(rp * rq for rp in p.ranks for rq in q.ranks)
    return ProjectionClass(alg, ranks)


def tensor_trace(t1: TraceVector, t2: TraceVector) -> TraceVector:
    return TraceVector(tuple(w1 * w2 for w1 in t1.weights for w2 in t2.weights))


@dataclass(frozen=True)
class RokhlinCertificate:
    """Finite-stage tower data for a tracial Rokhlin-type check.

    The tower is a family of mutually disjoint projections summing to p
    in the fixed-point stage algebra; params carries the scenario's
    rational thresholds; trace is the ambient trace restricted to the
    stage algebra and defect its exact value on 1 - p.
    """

    stage: int
    algebra: BlockAlgebra
    p: ProjectionClass
    tower: tuple[ProjectionClass, ...]
    trace: TraceVector
    defect: Fraction
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        total = ProjectionClass.zero(self.algebra)
        for e in self.tower:
            if e.algebra != self.algebra:
                raise ValueError("tower element lives in the wrong algebra")
            total = total.add(e)  # add() range-checks, enforcing disjointness
        if total.ranks != self.p.ranks:
            raise ValueError("tower does not sum to p")
        if trace_of(self.p.complement(), self.trace) != self.defect:
            raise ValueError("stored defect does not match the trace data")


def _uhf_fixed_stage(level: int, n_factors: int):
    """Stage data for the UHF scenario: fix algebra, tower support sizes."""
    k = level + 1
    spec = w_unitary_spec(k)
    fix1 = fixed_algebra(spec)  # blocks: (r+1, r) in exponent order
    stage = tensor_power_algebra(fix1, n_factors)
    return k, spec, fix1, stage


def certify_uhf_stage(n_factors: int, level: int, delta1, delta2) -> tuple[Report, RokhlinCertificate]:
    """Build and verify the finite-stage tower certificate in the UHF scenario.

    At tensor level L+1 each factor carries two rank-(3^{L+1}-1)/2
    projections moved to each other by the order-2 symmetry; the tower
    is indexed by sign words of length n_factors.  Checks:

      (i)   the trace defect of the tower sum is at most
            n_factors * 3^{-(L+1)} and below delta1;
      (ii)  in every two-level commutant summand the normalized trace of
            the complement is below 2 * n_factors * 3^{-(L+1)} and that
            bound is below delta2;
      (iii) blockwise rank majorization, so the partial isometry from
            the complement into the tower exists.

    All comparisons are exact rationals.  The report never raises on a
    failed inequality; it names the failing check.
    """
    N, L = int(n_factors), int(level)
    if N < 1 or L < 1:
        raise ValueError("need at least one factor and level >= 1")
    d1 = Fraction(delta1)
    d2 = Fraction(delta2)
    if d1 <= 0 or d2 <= 0:
        raise ValueError("thresholds must be positive")

    report = Report(
        "uhf_z2",
        params={"n_factors": N, "level": L, "delta1": d1, "delta2": d2},
    )
    report.add(
        "level_precondition",
        Fraction(2 * N, 3 ** L) < min(d1, d2, Fraction(1, 2)),
        lhs=Fraction(2 * N, 3 ** L),
        rhs=min(d1, d2, Fraction(1, 2)),
        relation="<",
    )

    k, spec, fix1, stage = _uhf_fixed_stage(L, N)
    r = half_power_size(k)

    # tower: e_h supported on summand h with rank r^N
    words = list(product(range(2), repeat=N))
    tower = []
    for h in words:
        idx = words.index(h)
        ranks = tuple(r ** N if i == idx else 0 for i in range(len(words)))
        tower.append(ProjectionClass(stage, ranks))
    p = ProjectionClass(stage, (r ** N,) * len(words))
    stage_trace = restriction_trace(stage, 3 ** (k * N))
    defect = trace_of(p.complement(), stage_trace)

    cert = RokhlinCertificate(
        stage=L,
        algebra=stage,
        p=p,
        tower=tuple(tower),
        trace=stage_trace,
        defect=defect,
        params={"delta1": d1, "delta2": d2},
    )

    # (i) trace defect via the tensor bound
    lam = Fraction(3 ** k - 1, 3 ** k)
    lhs, rhs, holds = tensor_trace_bound([lam] * N)
    report.add("trace_defect_bound", holds and lhs == defect, lhs=defect, rhs=rhs,
               relation="<=")
    report.add("trace_defect_below_delta1", rhs < d1, lhs=rhs, rhs=d1, relation="<")

    # (ii) commutant traces at the next tensor level, sizes from the
    # eigenvalue bookkeeping (not from any closed-form index)
    emb = fixed_embedding_multiplicities(spec, w_unitary_spec(k + 1))
    big = fixed_algebra(tensor_actions(spec, w_unitary_spec(k + 1)))
    big_sizes = big.sizes  # (r(T)+1, r(T)) in exponent order, T = 2k+1
    # 1 - e_0 - e_1 has rank 1 in the exponent-0 block, 0 in the other
    leftover_ranks = tuple(emb.entries[j][0] for j in range(2))
    fracs = tuple(
        Fraction(leftover_ranks[j], big_sizes[j]) for j in range(2)
    )
    factor_bound = Fraction(2, 3 ** k)
    report.add(
        "commutant_factor_traces",
        all(f < factor_bound for f in fracs),
        lhs=max(fracs),
        rhs=factor_bound,
        relation="<",
    )
    level_bound = Fraction(2 * N, 3 ** k)
    worst = Fraction(0)
    majorize = True
    for j in words:
        tr = 1 - _prod(1 - fracs[jm] for jm in j)
        worst = max(worst, tr)
        size = _prod(big_sizes[jm] for jm in j)
        rank_d = _prod(big_sizes[jm] - leftover_ranks[jm] for jm in j)
        if size - rank_d > rank_d:
            majorize = False
    report.add("commutant_trace_defect", worst < level_bound, lhs=worst,
               rhs=level_bound, relation="<")
    report.add("commutant_below_delta2", level_bound < d2, lhs=level_bound,
               rhs=d2, relation="<")

    # (iii) rank majorization; the margin check records when the trace
    # bound alone no longer guarantees it
    report.add("majorization_margin", level_bound < Fraction(1, 2),
               lhs=level_bound, rhs=Fraction(1, 2), relation="<",
               note="sufficient condition for the rank majorization below")
    report.add("majorization", majorize,
               note="rank(1 - d) <= rank(d) in every commutant summand")

    report.extras = {
        "tower_size": len(tower),
        "trace_defect": defect,
        "codomain_level": 2 * k + 1,
        "codomain_sizes": list(big_sizes),
        "notes": [
            "codomain sizes come from eigenvalue multiplicities; the quadratic "
            "index (L+1)(L+2) predicts a different level and is not used",
            NORM_CONDITION_NOTE,
        ],
    }
    return report, cert


def _prod(xs):
    out = None
    for x in xs:
        out = x if out is None else out * x
    return out if out is not None else 1


def tensor_certificates(
    c1: RokhlinCertificate, c2: RokhlinCertificate
) -> RokhlinCertificate:
    """Certificate for the tensor of two scenarios: pairwise tensor tower.

    The combined defect is exactly 1 - (1-d1)(1-d2), which the product
    decomposition bounds by d1 + d2.
    """
    if not (c1.algebra.is_multimatrix() and c2.algebra.is_multimatrix()):
        raise ValueError("tensor certificates need multimatrix stages")
    algebra = tensor_algebra(c1.algebra, c2.algebra)
    tower = tuple(
        tensor_projection(e, f, algebra) for e in c1.tower for f in c2.tower
    )
    p = tensor_projection(c1.p, c2.p, algebra)
    trace = tensor_trace(c1.trace, c2.trace)
    defect = 1 - (1 - c1.defect) * (1 - c2.defect)
    params = {**c1.params, **c2.params}
    return RokhlinCertificate(
        stage=max(c1.stage, c2.stage),
        algebra=algebra,
        p=p,
        tower=tower,
        trace=trace,
        defect=defect,
        params=params,
    )


# ---------------------------------------------------------------------------
# Circle-action stage certificates
# ---------------------------------------------------------------------------


def _stage_quadruple(m: MultiplicityMap, N: int) -> tuple[int, int, int, int]:
    """Recover (l00, l01, l10, l11) from a fixed-point stage map."""
    e = m.entries
    l00, l01, l10 = e[0][0], e[0][N], e[N][0]
    if e[N][N] % (2 * N) != 0:
        raise ValueError("map is not a fixed-point stage map")
    l11 = e[N][N] // (2 * N)
    for k in range(N):
        row = tuple(l00 if j == k else 0 for j in range(N)) + (l01,)
        if e[k] != row:
            raise ValueError("map is not a fixed-point stage map")
    if e[N] != (l10,) * N + (2 * N * l11,):
        raise ValueError("map is not a fixed-point stage map")
    return l00, l01, l10, l11


def certify_at_stage(system: DirectSystem, n: int, eps0) -> Report:
    """Verify the stage-n trace bound and majorization for a circle system.

    `system` is the fixed-point direct system (N small blocks plus one
    large block per stage, params carrying N).  Checks, all exact:

      - growth hypotheses at the stages used (l10 >= l00, l11 >= l01,
        and r0 <= r1 at stage 0);
      - the trace bound: on every extreme trace of stage n+1, the trace
        of the complement of the image of the large-block unit is at
        most max(l00/l01, l10/l11);
      - the stage-selection inequality min(l01/l00, l11/l10) > 1/eps0;
      - two-step commutant majorization: in every commutant summand the
        complement rank is at most the projection rank.
    """
    e0 = Fraction(eps0)
    if e0 <= 0:
        raise ValueError("eps0 must be positive")
    N = int(system.params.get("N", 0))
    if N < 2:
        raise ValueError("system params must define N >= 2")
    if len(system.stages) < n + 3:
        raise ValueError(
            f"need stages through {n + 2} for the two-step commutant; "
            f"system has {len(system.stages) - 1}"
        )

    l_n = _stage_quadruple(system.maps[n], N)
    l_n1 = _stage_quadruple(system.maps[n + 1], N)
    r_n = (system.stages[n].sizes[0], system.stages[n].sizes[N])
    r0_start = (system.stages[0].sizes[0], system.stages[0].sizes[N])

    report = Report(
        "at_circle_stage",
        params={
            "N": N,
            "stage": n,
            "eps0": e0,
            "l_n": list(l_n),
            "l_n_plus_1": list(l_n1),
            "r_n": list(r_n),
        },
    )

    report.add("hypothesis_r0_le_r1", r0_start[0] <= r0_start[1],
               lhs=r0_start[0], rhs=r0_start[1], relation="<=")
    for tag, (l00, l01, l10, l11) in (("n", l_n), ("n+1", l_n1)):
        report.add(
            f"hypothesis_l_onesided_{tag}",
            l10 >= l00 and l11 >= l01,
            note="l10 >= l00 and l11 >= l01",
        )

    # trace bound at every vertex of the trace simplex of stage n+1
    l00, l01, l10, l11 = l_n
    stage_next = system.stages[n + 1]
    complement_ranks = tuple(
        [l00 * r_n[0]] * N + [N * l10 * r_n[0]]
    )
    one_minus = ProjectionClass(stage_next, complement_ranks)
    bound = max(Fraction(l00, l01), Fraction(l10, l11))
    values = [trace_of(one_minus, t) for t in extreme_traces(stage_next)]
    report.add("trace_bound", all(v <= bound for v in values),
               lhs=max(values), rhs=bound, relation="<=",
               note="checked at every extreme trace; convexity covers the rest")

    report.add(
        "stage_selection",
        min(Fraction(l01, l00), Fraction(l11, l10)) > 1 / e0,
        lhs=min(Fraction(l01, l00), Fraction(l11, l10)),
        rhs=1 / e0,
        relation=">",
    )

    # two-step commutant majorization
    first, second = system.maps[n], system.maps[n + 1]
    composed = compose_maps(second, first)
    comm = relative_commutant(composed)
    ranks = image_ranks_of_central_projection((first, second), [N])
    proj = ProjectionClass(comm.algebra, ranks)
    report.add(
        "two_step_majorization",
        comparison_le(proj.complement(), proj),
        note="central projection dominates its complement in every "
             "commutant summand",
    )
    report.extras = {
        "commutant_sizes": list(comm.algebra.sizes),
        "commutant_pairs": [list(p) for p in comm.pairs],
        "central_ranks": list(ranks),
        "notes": [NORM_CONDITION_NOTE],
    }
    return report
