"""Module calculus over the Laurent polynomial ring Z[s, s^-1].

The acting variable (written sigma in the docs, s in code comments) is
the standard generator of the character group of the circle.  Modules
come in standard form: finite direct sums of

  * Cyclic(N)  —  Z[s]/<s^N - 1>, the order-N character ring, with s a
                  cyclic coordinate shift;
  * Free       —  Z with s acting as the identity;
  * Ring       —  a free rank-one Z[s, s^-1] lattice (s acts by
                  multiplication); the torsion-free completion-shadow
                  side of the comparison arguments.

General presentations are rejected: the systems this package feeds on
never produce them.  All linear algebra is exact (Smith normal form,
integer kernels); ideal membership in Z[s, s^-1] is decided by shifting
into Z[s] and dividing by the monic generator, which is valid because s
is a unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple

from . import intlinalg as ila
from .intlinalg import IntMatrix

CYCLIC = "cyclic"
FREE = "free"
RING = "ring"


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial, stored sparsely without zero terms."""

    coeffs: tuple[tuple[int, int], ...]  # sorted (exponent, coefficient)

    def __post_init__(self):
        acc: dict[int, int] = {}
        for e, c in self.coeffs:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        object.__setattr__(
            self,
            "coeffs",
            tuple(sorted((e, c) for e, c in acc.items() if c != 0)),
        )

    @staticmethod
    def from_dict(d: dict) -> "LaurentPoly":
        return LaurentPoly(tuple(d.items()))

    @staticmethod
    def monomial(exp: int, coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly(((exp, coeff),))

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly(())

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly(((0, 1),))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.coeffs + other.coeffs)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((e, -c) for e, c in self.coeffs))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        terms = []
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                terms.append((e1 + e2, c1 * c2))
        return LaurentPoly(tuple(terms))

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("only nonnegative powers")
        out = LaurentPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by s^k."""
        return LaurentPoly(tuple((e + k, c) for e, c in self.coeffs))

    def min_exp(self) -> int:
        if self.is_zero():
            return 0
        return self.coeffs[0][0]

    def max_exp(self) -> int:
        if self.is_zero():
            return 0
        return self.coeffs[-1][0]

    def coefficient(self, exp: int) -> int:
        for e, c in self.coeffs:
            if e == exp:
                return c
        return 0

    def __repr__(self) -> str:
        if self.is_zero():
            return "LaurentPoly(0)"
        parts = []
        for e, c in self.coeffs:
            if e == 0:
                parts.append(f"{c}")
            elif e == 1:
                parts.append(f"{c}*s")
            else:
                parts.append(f"{c}*s^{e}")
        return "LaurentPoly(" + " + ".join(parts) + ")"


SIGMA = LaurentPoly.monomial(1)
ONE = LaurentPoly.one()


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def poly_reduce(p: LaurentPoly, N: int) -> LaurentPoly:
    """Canonical representative modulo s^N - 1: exponents folded into [0, N)."""
    if N < 1:
        raise ValueError("modulus degree must be positive")
    return LaurentPoly(tuple((e % N, c) for e, c in p.coeffs))


def cyclotomic_sum(N: int) -> LaurentPoly:
    """1 + s + ... + s^(N-1)."""
    return LaurentPoly(tuple((e, 1) for e in range(N)))


def _divides_in_laurent(divisor: LaurentPoly, x: LaurentPoly) -> bool:
    """Exact divisibility in Z[s, s^-1] for a divisor monic in Z[s]."""
    if x.is_zero():
        return True
    shifted = x.shift(-x.min_exp())  # units s^k do not affect divisibility
    rem = dict(shifted.coeffs)
    dmax = divisor.max_exp()
    dcoeffs = dict(divisor.coeffs)
    if dcoeffs.get(dmax) != 1:
        raise ValueError("divisor must be monic")
    while rem:
        top = max(rem)
        if top < dmax:
            return False
        q = rem[top]
        for e, c in dcoeffs.items():
            k = top - dmax + e
            v = rem.get(k, 0) - q * c
            if v == 0:
                rem.pop(k, None)
            else:
                rem[k] = v
    return True


def in_shift_ideal(x: LaurentPoly, N: int) -> bool:
    """Membership in the ideal generated by s^N - 1."""
    gen = LaurentPoly(((N, 1), (0, -1)))
    return _divides_in_laurent(gen, x)


def cyclotomic_divisibility(x: LaurentPoly, N: int) -> bool:
    """Whether x = (1 + s + ... + s^(N-1)) * z for some Laurent z."""
    if N < 1:
        raise ValueError("N must be positive")
    return _divides_in_laurent(cyclotomic_sum(N), x)


def stab_equiv_check(x: LaurentPoly, N: int, n_max: int) -> bool:
    """(s-1)^n x in <s^N - 1> iff (s-1) x in <s^N - 1>, for 1 <= n <= n_max.

    The common criterion is divisibility of x by the full cyclotomic
    sum, so the power n is irrelevant; this verifies that stabilization
    explicitly.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    base = in_shift_ideal((SIGMA - ONE) * x, N)
    for n in range(1, n_max + 1):
        if in_shift_ideal(((SIGMA - ONE) ** n) * x, N) != base:
            return False
    return True


# ---------------------------------------------------------------------------
# The connecting map on equivariant K-groups of one stage
# ---------------------------------------------------------------------------


def phi_connecting_map(l: tuple[int, int, int, int], N: int) -> IntMatrix:
    """Matrix on Z^(N+1) of the stage map on the order-N character summand
    plus one trivial summand:

    (m_0, ..., m_{N-1}, m) ->
        ((l00 m_k + l01 m)_k, l10 * sum(m_k) + 2 N l11 m).
    """
    l00, l01, l10, l11 = (int(v) for v in l)
    if min(l00, l01, l10, l11) < 1:
        raise ValueError("stage parameters must be positive")
    if N < 2:
        raise ValueError("N must be at least 2")
    rows = []
    for k in range(N):
        rows.append(tuple(l00 if j == k else 0 for j in range(N)) + (l01,))
    rows.append((l10,) * N + (2 * N * l11,))
    return ila.mat(rows)


class InjectivityResult(NamedTuple):
    injective: bool
    kernel: tuple[tuple[int, ...], ...]

    def __bool__(self) -> bool:  # allows `if is_injective(m):`
        return self.injective


def is_injective(m: IntMatrix) -> InjectivityResult:
    """Exact integer kernel via Smith normal form; basis returned on failure."""
    kernel = ila.kernel_basis(ila.mat(m))
    return InjectivityResult(len(kernel) == 0, kernel)


def mod_augmentation_map(l: tuple[int, int, int, int], N: int) -> IntMatrix:
    """Induced map on the two augmentation quotients, as a 2x2 matrix.

    Summing the character coordinates sends the stage map to
    (s, m) -> (l00 s + N l01 m, l10 s + 2 N l11 m); it is injective
    exactly when the full map is.
    """
    l00, l01, l10, l11 = (int(v) for v in l)
    if min(l00, l01, l10, l11) < 1:
        raise ValueError("stage parameters must be positive")
    if N < 2:
        raise ValueError("N must be at least 2")
    return ila.mat(((l00, N * l01), (l10, 2 * N * l11)))


def injectivity_criterion(l: tuple[int, int, int, int]) -> bool:
    """The closed-form determinant test: 2 l11 l00 != l10 l01."""
    l00, l01, l10, l11 = l
    return 2 * l11 * l00 != l10 * l01


# ---------------------------------------------------------------------------
# Modules in standard form
# ---------------------------------------------------------------------------


class Summand(NamedTuple):
    kind: str
    order: int  # N for cyclic; 1 otherwise

    @staticmethod
    def cyclic(N: int) -> "Summand":
        if N < 1:
            raise ValueError("cyclic order must be >= 1")
        return Summand(CYCLIC, int(N))

    @staticmethod
    def free() -> "Summand":
        return Summand(FREE, 1)

    @staticmethod
    def ring() -> "Summand":
        return Summand(RING, 1)

    @property
    def z_rank(self) -> int:
        """Rank over Z of the summand (None-like -1 would be wrong: ring is
        infinite rank, so this is only valid for the finite kinds)."""
        if self.kind == CYCLIC:
            return self.order
        if self.kind == FREE:
            return 1
        raise ValueError("ring summands have no finite Z-rank")


@dataclass(frozen=True)
class RModule:
    """Finite direct sum of standard summands."""

    summands: tuple[Summand, ...]

    def __post_init__(self):
        for s in self.summands:
            if s.kind not in (CYCLIC, FREE, RING):
                raise ValueError(
                    f"unsupported summand {s!r}; only standard-form modules "
                    "(cyclic / free / ring) are accepted"
                )
            if s.kind == CYCLIC and s.order < 1:
                raise ValueError("cyclic order must be >= 1")

    @staticmethod
    def of(*summands: Summand) -> "RModule":
        return RModule(tuple(summands))

    def finite_summands(self) -> tuple[Summand, ...]:
        return tuple(s for s in self.summands if s.kind != RING)

    def ring_count(self) -> int:
        return sum(1 for s in self.summands if s.kind == RING)

    def to_json(self) -> dict:
        out = []
        for s in self.summands:
            if s.kind == CYCLIC:
                out.append({"cyclic": s.order})
            elif s.kind == FREE:
                out.append({"free": True})
            else:
                out.append({"ring": True})
        return {"summands": out}

    @staticmethod
    def from_json(data: dict) -> "RModule":
        summands = []
        for d in data["summands"]:
            if "cyclic" in d:
                summands.append(Summand.cyclic(d["cyclic"]))
            elif d.get("free"):
                summands.append(Summand.free())
            elif d.get("ring"):
                summands.append(Summand.ring())
            else:
                raise ValueError(f"unknown summand descriptor {d!r}")
        return RModule(tuple(summands))


def stage_module(N: int) -> RModule:
    """The stage K-module of the circle systems: Cyclic(N) + Free."""
    return RModule.of(Summand.cyclic(N), Summand.free())


def _shift_matrix(n: int) -> IntMatrix:
    """Cyclic coordinate shift on Z^n (the action of s on Cyclic(n))."""
    return ila.mat(
        tuple(
            tuple(1 if i == (j + 1) % n else 0 for j in range(n))
            for i in range(n)
        )
    )


def sigma_matrix(module: RModule) -> IntMatrix:
    """Block diagonal action of s on the finite part of the module.

    Rejects ring summands: those are infinite rank over Z and handled
    by the per-summand truncation models instead.
    """
    if module.ring_count():
        raise ValueError("sigma_matrix is only defined for the finite part")
    blocks = []
    for s in module.summands:
        if s.kind == CYCLIC:
            blocks.append(_shift_matrix(s.order))
        else:
            blocks.append(ila.identity(1))
    total = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b:
            rows.append((0,) * offset + tuple(row) + (0,) * (total - offset - len(row)))
        offset += len(b)
    return ila.mat(rows)


# elements: one integer vector per finite summand, one LaurentPoly per ring
Element = tuple


def _element_vectors(module: RModule, x: Element):
    if len(x) != len(module.summands):
        raise ValueError("element shape does not match the module")
    for s, comp in zip(module.summands, x):
        if s.kind == RING:
            if not isinstance(comp, LaurentPoly):
                raise ValueError("ring components must be Laurent polynomials")
        else:
            comp = tuple(int(v) for v in comp)
            if len(comp) != s.z_rank:
                raise ValueError("component length does not match the summand")
        yield s, comp


def _is_zero_element(module: RModule, x: Element) -> bool:
    for s, comp in _element_vectors(module, x):
        if s.kind == RING:
            if not comp.is_zero():
                return False
        elif any(v != 0 for v in comp):
            return False
    return True


def ao(module: RModule, x: Element):
    """Least m >= 1 with (s^m - 1) x = 0; math.inf if no power works.

    On cyclic and free summands the answer divides the lcm of the
    cyclic orders; a nonzero ring component is never annihilated.
    """
    comps = list(_element_vectors(module, x))
    if _is_zero_element(module, x):
        raise ValueError("ao is undefined at 0")
    for s, comp in comps:
        if s.kind == RING and not comp.is_zero():
            return math.inf
    orders = [s.order if s.kind == CYCLIC else 1 for s, _ in comps]
    bound = lcm(*orders) if orders else 1
    for m in range(1, bound + 1):
        if bound % m != 0:
            continue  # ao divides the lcm of the supporting orders
        killed = True
        for s, comp in comps:
            if s.kind == RING:
                continue
            if s.kind == FREE:
                continue  # s acts as 1, so s^m - 1 kills everything
            shifted = tuple(comp[(i - m) % s.order] for i in range(s.order))
            if shifted != tuple(comp):
                killed = False
                break
        if killed:
            return m
    raise AssertionError("unreachable: lcm of orders always annihilates")


def mao(module: RModule):
    """Largest annihilator order over nonzero elements.

    Additive over direct sums, so it is the max over summand values:
    N for Cyclic(N), 1 for Free, infinity for Ring; 0 for the zero
    module.
    """
    if not module.summands:
        return 0
    vals = []
    for s in module.summands:
        if s.kind == CYCLIC:
            vals.append(s.order)
        elif s.kind == FREE:
            vals.append(1)
        else:
            vals.append(math.inf)
    return max(vals)


def compare_actions_by_mao(N1: int, N2: int) -> bool:
    """Whether the stage modules for N1 and N2 are distinguishable."""
    if N1 < 2 or N2 < 2:
        raise ValueError("the invariant compares parameters >= 2")
    return mao(stage_module(N1)) != mao(stage_module(N2))


def xi_iota_maps(N: int) -> tuple[IntMatrix, IntMatrix]:
    """(iota, xi): character sum Z^N -> Z, and diagonal orbit Z -> Z^N.

    iota sends every character power to 1; xi sends 1 to the full orbit
    sum 1 + s + ... + s^(N-1).  Composed, iota o xi is multiplication
    by N, and the orbit sum is shift invariant.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    iota = ila.mat(((1,) * N,))
    xi = ila.mat(tuple((1,) for _ in range(N)))
    return iota, xi


# ---------------------------------------------------------------------------
# Quotients by powers of the augmentation ideal, and their shadows
# ---------------------------------------------------------------------------


class AbelianGroup(NamedTuple):
    """Invariant-factor presentation of a finitely generated abelian group."""

    free_rank: int
    torsion: tuple[int, ...]

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def _group_of_quotient(dim: int, relations: IntMatrix) -> AbelianGroup:
    """Z^dim modulo the column span of `relations`."""
    if dim == 0:
        return AbelianGroup(0, ())
    facs = ila.invariant_factors(relations) if relations and relations[0] else ()
    if relations and not relations[0]:
        facs = ()
    torsion = tuple(sorted(f for f in facs if f != 1))
    return AbelianGroup(dim - len(facs), torsion)


def _sum_groups(groups: Iterable[AbelianGroup]) -> AbelianGroup:
    free = 0
    torsion: list[int] = []
    for g in groups:
        free += g.free_rank
        torsion.extend(g.torsion)
    return AbelianGroup(free, tuple(sorted(torsion)))


def _powered(mat_a: IntMatrix, n: int) -> IntMatrix:
    out = ila.identity(len(mat_a))
    for _ in range(n):
        out = ila.mat_mul(out, mat_a)
    return out


def laurent_ring_mod_In(n: int, margin: int = 3) -> AbelianGroup:
    """Z[s, s^-1] modulo the n-th power of the augmentation ideal <s - 1>.

    Computed honestly from a truncated presentation: generators are the
    classes of s^0..s^(n+margin-1); relations are all shifts
    s^k (s-1)^n that stay inside that window.  Negative powers of s need
    no extra generators because s is invertible modulo (s-1)^n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gens = n + margin
    rel_polys = [
        ((SIGMA - ONE) ** n).shift(k) for k in range(gens - n)
    ]
    cols = []
    for p in rel_polys:
        cols.append(tuple(p.coefficient(e) for e in range(gens)))
    relations = ila.from_columns(cols, gens)
    return _group_of_quotient(gens, relations)


def quotient_mod_In(module: RModule, n: int) -> AbelianGroup:
    """Invariant factors of M / I^n M, I the augmentation ideal.

    Free summands survive unchanged (the ideal acts as zero on them);
    cyclic summands are genuine lattice quotients by (s-1)^n; ring
    summands contribute a free group of rank n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    groups = []
    for s in module.summands:
        if s.kind == RING:
            groups.append(laurent_ring_mod_In(n))
            continue
        d = s.z_rank
        S = _shift_matrix(s.order) if s.kind == CYCLIC else ila.identity(1)
        SmI = ila.mat(
            tuple(
                tuple(S[i][j] - (1 if i == j else 0) for j in range(d))
                for i in range(d)
            )
        )
        groups.append(_group_of_quotient(d, _powered(SmI, n)))
    return _sum_groups(groups)


def _stable_fixed_finite(S: IntMatrix, n: int) -> AbelianGroup:
    """Image in M/I^(n-1)M of ker(s - 1 on M/I^n M) for a lattice summand."""
    d = len(S)
    SmI = ila.mat(
        tuple(
            tuple(S[i][j] - (1 if i == j else 0) for j in range(d))
            for i in range(d)
        )
    )
    A_n = _powered(SmI, n)
    A_prev = _powered(SmI, n - 1)
    kernel_lattice = ila.preimage_lattice(SmI, A_n)
    meet = ila.lattice_intersection(kernel_lattice, ila.lattice_basis(A_prev))
    free, torsion = ila.quotient_group(kernel_lattice, meet)
    return AbelianGroup(free, tuple(sorted(t for t in torsion)))


def _stable_fixed_ring(n: int) -> AbelianGroup:
    """Same computation on the truncation model Z[u]/u^n of a ring summand.

    Multiplication by (s - 1) is multiplication by u; the kernel is the
    top line u^(n-1) Z, which dies under truncation to Z[u]/u^(n-1).
    """
    J = ila.mat(
        tuple(
            tuple(1 if i == j + 1 else 0 for j in range(n))
            for i in range(n)
        )
    )
    kern = ila.kernel_basis(J)
    truncated = [vec[: n - 1] for vec in kern]
    span = ila.lattice_basis(ila.from_columns(truncated, n - 1))
    free = ila.shape(span)[1]
    return AbelianGroup(free, ())


def stable_sigma_fixed(module: RModule, n: int) -> AbelianGroup:
    """Image in M/I^(n-1)M of the (s-1)-kernel of M/I^n M.

    This is the truncation-level discriminator: on modules built purely
    from ring summands (free Z[s, s^-1] lattices, the torsion-free
    side) the image is 0 at every level, while a Cyclic(N >= 2) summand
    contributes the nonzero class of the orbit sum 1 + s + ... +
    s^(N-1), which is killed by s - 1 on the nose and survives every
    truncation.
    """
    if n < 2:
        raise ValueError("n must be >= 2 (two truncation levels involved)")
    groups = []
    for s in module.summands:
        if s.kind == RING:
            groups.append(_stable_fixed_ring(n))
        else:
            S = _shift_matrix(s.order) if s.kind == CYCLIC else ila.identity(1)
            groups.append(_stable_fixed_finite(S, n))
    return _sum_groups(groups)


def survives_truncation(module: RModule, n: int, x: Element) -> bool:
    """Whether (s-1)x = 0 holds in M/I^n M while x != 0 in M/I^(n-1)M.

    Witness check for the discriminator; only finite summands carry
    candidate witnesses (ring components must be zero).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    fin = module.finite_summands()
    if len(fin) != len(module.summands):
        for s, comp in _element_vectors(module, x):
            if s.kind == RING and not comp.is_zero():
                raise ValueError("witnesses must be supported on finite summands")
        x = tuple(
            comp for s, comp in _element_vectors(module, x) if s.kind != RING
        )
    finite = RModule(fin)
    vec = []
    for s, comp in _element_vectors(finite, x):
        vec.extend(int(v) for v in comp)
    vec = tuple(vec)
    S = sigma_matrix(finite)
    d = len(S)
    SmI = ila.mat(
        tuple(
            tuple(S[i][j] - (1 if i == j else 0) for j in range(d))
            for i in range(d)
        )
    )
    A_n = _powered(SmI, n)
    A_prev = _powered(SmI, n - 1)
    image = ila.mat_vec(SmI, vec)
    in_kernel = ila.in_column_span(ila.lattice_basis(A_n), image)
    dies_early = ila.in_column_span(ila.lattice_basis(A_prev), vec)
    return in_kernel and not dies_early


def torsion_kernel_stabilization(module: RModule, n_max: int) -> bool:
    """Whether ker((s-1)^n) = ker(s-1) on the module for 2 <= n <= n_max.

    Computed by exact integer kernels on the finite part; ring summands
    have zero kernel at every power and cannot break equality.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    fin = RModule(module.finite_summands())
    if not fin.summands:
        return True
    S = sigma_matrix(fin)
    d = len(S)
    SmI = ila.mat(
        tuple(
            tuple(S[i][j] - (1 if i == j else 0) for j in range(d))
            for i in range(d)
        )
    )
    base = ila.kernel_basis(SmI)
    for n in range(2, n_max + 1):
        power = _powered(SmI, n)
        kern = ila.kernel_basis(power)
        # ker(s-1) is always contained in ker((s-1)^n); check the reverse
        for vec in kern:
            if any(v != 0 for v in ila.mat_vec(SmI, vec)):
                return False
        if len(kern) != len(base):
            return False
    return True
