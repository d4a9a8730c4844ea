"""Block algebras, multiplicity maps, and direct systems.

A stage algebra is a finite direct sum of blocks, each either a full
matrix algebra or a circle-matrix algebra (matrices over continuous
functions on the circle).  A unital embedding between two stage
algebras is recorded only through its partial embedding multiplicities,
a nonnegative integer matrix; that shadow is all the rest of the
package ever needs.  Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

MATRIX = "matrix"
CIRCLE = "circle"

Quadruple = tuple[int, int, int, int]  # (l00, l01, l10, l11)


class Block(NamedTuple):
    kind: str
    size: int


@dataclass(frozen=True)
class BlockAlgebra:
    """Finite direct sum of matrix / circle-matrix blocks."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("a block algebra needs at least one block")
        object.__setattr__(
            self, "blocks", tuple(Block(str(k), int(s)) for k, s in self.blocks)
        )
        for b in self.blocks:
            if b.kind not in (MATRIX, CIRCLE):
                raise ValueError(f"unknown block kind {b.kind!r}")
            if b.size < 1:
                raise ValueError("block sizes must be positive")

    @staticmethod
    def matrices(*sizes: int) -> "BlockAlgebra":
        return BlockAlgebra(tuple(Block(MATRIX, s) for s in sizes))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.size for b in self.blocks)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def matrix_dimension(self) -> int:
        """Total linear dimension of the matrix-kind blocks."""
        return sum(b.size ** 2 for b in self.blocks if b.kind == MATRIX)

    def is_multimatrix(self) -> bool:
        return all(b.kind == MATRIX for b in self.blocks)

    def to_json(self) -> dict:
        return {"blocks": [{"kind": b.kind, "size": b.size} for b in self.blocks]}

    @staticmethod
    def from_json(data: dict) -> "BlockAlgebra":
        return BlockAlgebra(
            tuple(Block(d["kind"], d["size"]) for d in data["blocks"])
        )


@dataclass(frozen=True)
class MultiplicityMap:
    """Partial embedding multiplicities of a unital map between stages.

    entries[j][k] counts how many times source block k sits inside
    destination block j.  Unital consistency (each destination size is
    the multiplicity-weighted sum of source sizes) is enforced at
    construction; it is exactly the condition that the multiplicities
    come from a unital embedding.
    """

    entries: tuple[tuple[int, ...], ...]
    src: BlockAlgebra
    dst: BlockAlgebra

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if len(rows) != self.dst.num_blocks:
            raise ValueError("row count must match destination blocks")
        for row in rows:
            if len(row) != self.src.num_blocks:
                raise ValueError("column count must match source blocks")
            if any(x < 0 for x in row):
                raise ValueError("multiplicities must be nonnegative")
        src_sizes = self.src.sizes
        for j, row in enumerate(rows):
            total = sum(m * s for m, s in zip(row, src_sizes))
            if total != self.dst.sizes[j]:
                raise ValueError(
                    f"not unital at destination block {j}: "
                    f"{total} != {self.dst.sizes[j]}"
                )

    @staticmethod
    def identity(algebra: BlockAlgebra) -> "MultiplicityMap":
        n = algebra.num_blocks
        entries = tuple(
            tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
        )
        return MultiplicityMap(entries, algebra, algebra)

    def column_has_positive(self) -> tuple[bool, ...]:
        return tuple(
            any(row[k] > 0 for row in self.entries)
            for k in range(self.src.num_blocks)
        )

    def to_json(self) -> dict:
        return {
            "entries": [list(row) for row in self.entries],
            "src": self.src.to_json(),
            "dst": self.dst.to_json(),
        }

    @staticmethod
    def from_json(data: dict) -> "MultiplicityMap":
        return MultiplicityMap(
            tuple(tuple(row) for row in data["entries"]),
            BlockAlgebra.from_json(data["src"]),
            BlockAlgebra.from_json(data["dst"]),
        )


def compose_maps(outer: MultiplicityMap, inner: MultiplicityMap) -> MultiplicityMap:
    """Multiplicity matrix of the composite embedding (matrix product)."""
    if inner.dst != outer.src:
        raise ValueError("inner.dst must equal outer.src")
    rows = []
    for j in range(outer.dst.num_blocks):
        row = []
        for k in range(inner.src.num_blocks):
            row.append(
                sum(
                    outer.entries[j][t] * inner.entries[t][k]
                    for t in range(outer.src.num_blocks)
                )
            )
        rows.append(tuple(row))
    return MultiplicityMap(tuple(rows), inner.src, outer.dst)


@dataclass(frozen=True)
class Commutant:
    """Relative commutant of the range of a unital embedding.

    One matrix block per (destination, source) pair with positive
    multiplicity; the block size is that multiplicity.  pairs[i] records
    which (dst, src) pair the i-th block came from.
    """

    algebra: BlockAlgebra
    pairs: tuple[tuple[int, int], ...]


def relative_commutant(m: MultiplicityMap) -> Commutant:
    """Commutant of the image of a unital embedding of multimatrix algebras."""
    if not m.src.is_multimatrix():
        raise ValueError("source blocks must be finite dimensional")
    blocks = []
    pairs = []
    for j in range(m.dst.num_blocks):
        for k in range(m.src.num_blocks):
            mult = m.entries[j][k]
            if mult > 0:
                blocks.append(Block(MATRIX, mult))
                pairs.append((j, k))
    return Commutant(BlockAlgebra(tuple(blocks)), pairs)


def image_ranks_of_central_projection(
    two_step: tuple[MultiplicityMap, MultiplicityMap],
    proj: Iterable[int],
) -> tuple[int, ...]:
    """Ranks of a middle-stage central projection in the two-step commutant.

    two_step is (first, second) with second o first defined; proj selects
    middle-stage blocks (the support of the central projection).  For
    each block of relative_commutant(second o first), the returned rank
    is the part of the composed multiplicity that factors through the
    selected middle blocks.  An empty proj yields all zeros.
    """
    first, second = two_step
    if first.dst != second.src:
        raise ValueError("two_step maps do not compose")
    middle = set(int(t) for t in proj)
    if any(t < 0 or t >= first.dst.num_blocks for t in middle):
        raise ValueError("proj selects nonexistent middle blocks")
    composed = compose_maps(second, first)
    commutant = relative_commutant(composed)
    ranks = []
    for (j, k) in commutant.pairs:
        ranks.append(
            sum(second.entries[j][t] * first.entries[t][k] for t in sorted(middle))
        )
    return tuple(ranks)


@dataclass(frozen=True)
class DirectSystem:
    """A chain of stage algebras with connecting multiplicity maps."""

    stages: tuple[BlockAlgebra, ...]
    maps: tuple[MultiplicityMap, ...]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.maps) != max(len(self.stages) - 1, 0):
            raise ValueError("need exactly one map between consecutive stages")
        for n, m in enumerate(self.maps):
            if m.src != self.stages[n] or m.dst != self.stages[n + 1]:
                raise ValueError(f"map {n} does not connect stages {n} -> {n + 1}")

    def to_json(self) -> dict:
        return {
            "stages": [s.to_json() for s in self.stages],
            "maps": [{"entries": [list(r) for r in m.entries]} for m in self.maps],
            "params": dict(self.params),
        }

    @staticmethod
    def from_json(data: dict) -> "DirectSystem":
        stages = tuple(BlockAlgebra.from_json(s) for s in data["stages"])
        maps = tuple(
            MultiplicityMap(
                tuple(tuple(r) for r in m["entries"]), stages[n], stages[n + 1]
            )
            for n, m in enumerate(data["maps"])
        )
        return DirectSystem(stages, maps, dict(data.get("params", {})))


def dims_recursion(
    l_seq: Iterable[Quadruple], N: int, r0: tuple[int, int], n: int
) -> tuple[int, int]:
    """Block-size pair after n applications of the stage matrices.

    Stage m contributes the matrix [[l00, l01], [N*l10, 2*N*l11]] built
    from l_seq[m] = (l00, l01, l10, l11); the pair recursion is
    r(m+1) = l(m) r(m).  All values exact.
    """
    if n < 0:
        raise ValueError("stage index must be nonnegative")
    if N < 1:
        raise ValueError("N must be positive")
    seq = list(l_seq)
    if len(seq) < n:
        raise ValueError(f"need {n} stage quadruples, got {len(seq)}")
    r = (int(r0[0]), int(r0[1]))
    if r[0] < 1 or r[1] < 1:
        raise ValueError("starting sizes must be positive")
    for m in range(n):
        l00, l01, l10, l11 = (int(x) for x in seq[m])
        if min(l00, l01, l10, l11) < 1:
            raise ValueError("stage parameters must be positive")
        r = (l00 * r[0] + l01 * r[1], N * l10 * r[0] + 2 * N * l11 * r[1])
    return r


# ---------------------------------------------------------------------------
# Builders for the circle-action direct systems.
#
# The stage algebra on the group side is a circle-matrix pair of sizes
# (N*r0(n), r1(n)); its fixed-point shadow is the multimatrix algebra
# with N blocks of size r0(n) followed by one of size r1(n).
# ---------------------------------------------------------------------------


def at_stage_algebra(N: int, r: tuple[int, int]) -> BlockAlgebra:
    """Circle-matrix stage pair of sizes (N*r0, r1)."""
    return BlockAlgebra((Block(CIRCLE, N * r[0]), Block(CIRCLE, r[1])))


def at_stage_map(
    l: Quadruple, N: int, r: tuple[int, int]
) -> MultiplicityMap:
    """Connecting multiplicities between consecutive circle-matrix stages."""
    l00, l01, l10, l11 = l
    r_next = dims_recursion([l], N, r, 1)
    return MultiplicityMap(
        ((l00, N * l01), (l10, 2 * N * l11)),
        at_stage_algebra(N, r),
        at_stage_algebra(N, r_next),
    )


def fixed_stage_algebra(N: int, r: tuple[int, int]) -> BlockAlgebra:
    """Fixed-point stage: N matrix blocks of size r0, then one of size r1."""
    return BlockAlgebra.matrices(*([r[0]] * N + [r[1]]))


def fixed_stage_map(l: Quadruple, N: int, r: tuple[int, int]) -> MultiplicityMap:
    """Connecting multiplicities between consecutive fixed-point stages.

    Source and destination blocks are indexed 0..N-1 (size r0) plus N
    (size r1).  Block j < N maps into block j with multiplicity l00 and
    into block N with multiplicity l10; block N maps into every j < N
    with multiplicity l01 and into block N with multiplicity 2*N*l11.
    """
    l00, l01, l10, l11 = l
    r_next = dims_recursion([l], N, r, 1)
    rows = []
    for k in range(N):
        rows.append(tuple(l00 if j == k else 0 for j in range(N)) + (l01,))
    rows.append((l10,) * N + (2 * N * l11,))
    return MultiplicityMap(
        tuple(rows), fixed_stage_algebra(N, r), fixed_stage_algebra(N, r_next)
    )


def fixed_point_system(
    N: int,
    l_rule: Callable[[int], Quadruple],
    r0: tuple[int, int],
    stages: int,
    params: dict | None = None,
) -> DirectSystem:
    """Fixed-point direct system through the given number of stages."""
    algebras = []
    maps = []
    r = (int(r0[0]), int(r0[1]))
    for n in range(stages + 1):
        algebras.append(fixed_stage_algebra(N, r))
        if n < stages:
            l = l_rule(n)
            maps.append(fixed_stage_map(l, N, r))
            r = dims_recursion([l], N, r, 1)
    meta = {"N": N, "r0": list(r0)}
    if params:
        meta.update(params)
    return DirectSystem(tuple(algebras), tuple(maps), meta)


def circle_system(
    N: int,
    l_rule: Callable[[int], Quadruple],
    r0: tuple[int, int],
    stages: int,
    params: dict | None = None,
) -> DirectSystem:
    """Circle-matrix direct system through the given number of stages."""
    algebras = []
    maps = []
    r = (int(r0[0]), int(r0[1]))
    for n in range(stages + 1):
        algebras.append(at_stage_algebra(N, r))
        if n < stages:
            l = l_rule(n)
            maps.append(at_stage_map(l, N, r))
            r = dims_recursion([l], N, r, 1)
    meta = {"N": N, "r0": list(r0)}
    if params:
        meta.update(params)
    return DirectSystem(tuple(algebras), tuple(maps), meta)


def odd_growth_rule(n: int) -> Quadruple:
    """The standard growth schedule: l00 = l10 = 1, l01 = l11 = 2n + 1."""
    return (1, 2 * n + 1, 1, 2 * n + 1)
