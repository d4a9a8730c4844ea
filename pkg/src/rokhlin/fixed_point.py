"""Fixed-point algebras of inner finite-group actions on multimatrix algebras.

An inner action of a finite cyclic (or product of cyclic) group is
recorded by the eigenvalue data of its implementing unitaries: for each
block, which characters occur and with what multiplicity.  The fixed
algebra is then the direct sum of the eigenspace blocks, and the
multiplicities of the embedding x -> x (x) 1 between fixed algebras are
pure convolution arithmetic.  Nothing here ever diagonalizes a matrix
numerically; the eigenvalue data is exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .blocks import Block, BlockAlgebra, MATRIX, MultiplicityMap

EigBlock = tuple[tuple[int, int], ...]  # ((exponent mod d, multiplicity), ...)


@dataclass(frozen=True)
class InnerActionSpec:
    """Eigenvalue data of an inner action on a multimatrix algebra.

    group_order is the order d of the acting cyclic group; for each
    source block the spec lists (character exponent mod d, multiplicity)
    pairs.  The sum of the multiplicities in a block is the block size.
    """

    group_order: int
    blocks: tuple[EigBlock, ...]

    def __post_init__(self):
        if self.group_order < 1:
            raise ValueError("group order must be positive")
        if not self.blocks:
            raise ValueError("need at least one block")
        canon = []
        for blk in self.blocks:
            seen = {}
            for e, m in blk:
                e = int(e) % self.group_order
                if m < 1:
                    raise ValueError("eigenvalue multiplicities must be >= 1")
                if e in seen:
                    raise ValueError("exponents must be distinct within a block")
                seen[e] = int(m)
            canon.append(tuple(sorted(seen.items())))
        object.__setattr__(self, "blocks", tuple(canon))

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(sum(m for _, m in blk) for blk in self.blocks)

    def algebra(self) -> BlockAlgebra:
        """The multimatrix algebra the action lives on."""
        return BlockAlgebra.matrices(*self.block_sizes)

    def multiplicity(self, block: int, exponent: int) -> int:
        e = exponent % self.group_order
        for e1, m in self.blocks[block]:
            if e1 == e:
                return m
        return 0

    def to_json(self) -> dict:
        return {
            "group_order": self.group_order,
            "blocks": [[[e, m] for e, m in blk] for blk in self.blocks],
        }

    @staticmethod
    def from_json(data: dict) -> "InnerActionSpec":
        return InnerActionSpec(
            data["group_order"],
            tuple(tuple((e, m) for e, m in blk) for blk in data["blocks"]),
        )


def trivial_action(sizes: tuple[int, ...], group_order: int = 1) -> InnerActionSpec:
    """The action whose unitaries are scalars: a single exponent-0 eigenspace."""
    return InnerActionSpec(group_order, tuple(((0, s),) for s in sizes))


def half_power_size(k: int) -> int:
    """(3**k - 1) // 2, the off-diagonal block size at UHF level k."""
    return (3 ** k - 1) // 2


def w_unitary_spec(k: int) -> InnerActionSpec:
    """Eigenvalue data of the order-2 swap-plus-fixed-corner unitary at level k.

    The unitary in M_{3^k} swaps two blocks of size (3^k - 1)/2 and
    fixes one extra coordinate, so it has eigenvalue +1 (exponent 0)
    with multiplicity (3^k - 1)/2 + 1 and eigenvalue -1 (exponent 1)
    with multiplicity (3^k - 1)/2.
    """
    if k < 1:
        raise ValueError("level must be >= 1")
    r = half_power_size(k)
    return InnerActionSpec(2, (((0, r + 1), (1, r)),))


def fixed_algebra(a: InnerActionSpec) -> BlockAlgebra:
    """Fixed-point algebra: one block per eigenvalue of each source block.

    Blocks are emitted source-block-major, then by exponent; the block
    size is the eigenvalue multiplicity (the eigenspace dimension).
    """
    blocks = []
    for blk in a.blocks:
        for _, m in blk:
            blocks.append(Block(MATRIX, m))
    return BlockAlgebra(tuple(blocks))


def fixed_block_labels(a: InnerActionSpec) -> tuple[tuple[int, int], ...]:
    """(source block index, exponent) label of each fixed_algebra block."""
    labels = []
    for i, blk in enumerate(a.blocks):
        for e, _ in blk:
            labels.append((i, e))
    return tuple(labels)


def _combined_order(a: InnerActionSpec, b: InnerActionSpec) -> tuple[int, int, int]:
    """Common group order and exponent scalings for a tensor product."""
    da, db = a.group_order, b.group_order
    if da == db:
        return da, 1, 1
    if gcd(da, db) != 1:
        raise ValueError(
            "tensor product needs equal group orders or coprime orders"
        )
    d = da * db
    return d, d // da, d // db


def tensor_actions(a: InnerActionSpec, b: InnerActionSpec) -> InnerActionSpec:
    """Eigenvalue data of the tensor-product action.

    Blocks are paired a-major; within a pair the eigenvalue
    multiplicities convolve: mult(e) = sum over e1 + e2 = e (mod d) of
    mult_a(e1) * mult_b(e2).
    """
    d, sa, sb = _combined_order(a, b)
    blocks = []
    for blk_a in a.blocks:
        for blk_b in b.blocks:
            conv: dict[int, int] = {}
            for e1, m1 in blk_a:
                for e2, m2 in blk_b:
                    e = (e1 * sa + e2 * sb) % d
                    conv[e] = conv.get(e, 0) + m1 * m2
            blocks.append(tuple(sorted(conv.items())))
    return InnerActionSpec(d, tuple(blocks))


def fixed_embedding_multiplicities(
    a: InnerActionSpec, b: InnerActionSpec
) -> MultiplicityMap:
    """Multiplicities of fix(a) -> fix(a (x) b) induced by x -> x (x) 1.

    The eigenvalue-e1 fixed block of source block i lands in the
    eigenvalue-e fixed block of tensor block (i, j) with multiplicity
    mult_{b,j}(e - e1); blocks of fix(a (x) b) over other source blocks
    receive nothing.  The result is unital-consistent by construction
    (the constructor would reject it otherwise).
    """
    d, sa, sb = _combined_order(a, b)
    ab = tensor_actions(a, b)
    src = fixed_algebra(a)
    dst = fixed_algebra(ab)
    src_labels = fixed_block_labels(a)
    dst_labels = fixed_block_labels(ab)
    nb = len(b.blocks)
    rows = []
    for (ij, e) in dst_labels:
        i_dst, j_dst = divmod(ij, nb)
        row = []
        for (i_src, e1) in src_labels:
            if i_src != i_dst:
                row.append(0)
            else:
                # solve e1*sa + e2*sb = e (mod d) for the b-exponent e2
                need = (e - e1 * sa) % d
                mult = 0
                for e2, m2 in b.blocks[j_dst]:
                    if (e2 * sb) % d == need:
                        mult += m2
                row.append(mult)
        rows.append(tuple(row))
    return MultiplicityMap(tuple(rows), src, dst)
