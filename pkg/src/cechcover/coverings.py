"""Coverings of an algebra by two-sided ideals and the completeness check.

A covering is an ordered family I_1..I_N of ideals with zero intersection.
Completeness asks the patch sequence 0 -> A -> (+)A_i -> (+)A_ij to be
exact; exactness is checked on k-spans, which detects exactness of the
underlying bimodule sequence because every map involved is k-linear with
matching kernels and images.

Only ordered pairs i < j are materialized in the target of tau: the (j,i)
blocks are negatives of the (i,j) blocks and carry no extra rank.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebras import (
    Algebra, AlgebraHom, Ideal,
    direct_sum, ideal_closure, ideal_intersection, ideal_sum,
    matrix_algebra, quotient, split_commutative, square_zero,
    truncated_polynomial, upper_triangular, zero_algebra,
)
from .errors import DimensionMismatchError, StructureError
from .linalg import (
    Field, Matrix, block_matrix, image_basis, kernel_basis,
    quotient_section,
)


@dataclass(frozen=True)
class CompletenessReport:
    is_covering: bool
    intersection_dim: int
    exact_at_a: bool
    exact_at_b: bool
    ker_tau_dim: int
    im_pi_dim: int
    complete: bool

    def as_dict(self) -> dict:
        return {
            "is_covering": self.is_covering,
            "intersection_dim": self.intersection_dim,
            "exact_at_A": self.exact_at_a,
            "exact_at_B": self.exact_at_b,
            "ker_tau_dim": self.ker_tau_dim,
            "im_pi_dim": self.im_pi_dim,
            "complete": self.complete,
        }


class Covering:
    """An algebra with an ordered list of ideals and derived patch data.

    Patch indices are 1-based.  ``patch(i)`` returns (A_i, pi_i) and
    ``pair(i, j)`` returns (A_ij, q_ij, pi_i_ij, pi_j_ij) for i < j, where
    q_ij: A -> A_ij is the direct projection and pi_i_ij: A_i -> A_ij the
    induced one.  The square pi_i_ij . pi_i = pi_j_ij . pi_j is verified
    at construction.
    """

    def __init__(self, algebra: Algebra, ideals: Sequence[Ideal]):
        if not ideals:
            raise ValueError("a covering needs at least one ideal")
        for ideal in ideals:
            if ideal.algebra != algebra:
                raise DimensionMismatchError("ideal belongs to a different algebra")
        self.algebra = algebra
        self.ideals = tuple(ideals)
        self.n_patches = len(self.ideals)

        self._patches = [quotient(algebra, ideal) for ideal in self.ideals]
        self._sections = [quotient_section(algebra.dim, ideal.space) for ideal in self.ideals]
        self._pairs = {}
        for a in range(self.n_patches):
            for b in range(a + 1, self.n_patches):
                sum_ideal = ideal_sum(self.ideals[a], self.ideals[b])
                a_ij, q_ij = quotient(algebra, sum_ideal)
                pi_a = AlgebraHom(self._patches[a][0], a_ij,
                                  q_ij.matrix.mul(self._sections[a]))
                pi_b = AlgebraHom(self._patches[b][0], a_ij,
                                  q_ij.matrix.mul(self._sections[b]))
                left = pi_a.matrix.mul(self._patches[a][1].matrix)
                right = pi_b.matrix.mul(self._patches[b][1].matrix)
                if left != right:
                    raise StructureError(
                        f"patch square ({a + 1},{b + 1}) does not commute",
                        witness=(a + 1, b + 1))
                self._pairs[(a + 1, b + 1)] = (a_ij, q_ij, pi_a, pi_b)
        self._b_algebra: Optional[Algebra] = None

    @property
    def field(self) -> Field:
        return self.algebra.field

    def patch(self, i: int) -> tuple[Algebra, AlgebraHom]:
        return self._patches[i - 1]

    def patch_section(self, i: int) -> Matrix:
        return self._sections[i - 1]

    def pair(self, i: int, j: int):
        return self._pairs[(i, j)]

    def patch_dims(self) -> tuple[int, ...]:
        return tuple(p[0].dim for p in self._patches)

    def pair_dims(self) -> tuple[int, ...]:
        return tuple(self._pairs[key][0].dim for key in sorted(self._pairs))

    @property
    def b_algebra(self) -> Algebra:
        """The patch sum (+)A_i as an algebra with componentwise product."""
        if self._b_algebra is None:
            acc = self._patches[0][0]
            for alg, _ in self._patches[1:]:
                acc = direct_sum(acc, alg)
            if acc.dim == 0:
                acc = zero_algebra(self.field)
            self._b_algebra = acc
        return self._b_algebra

    def patch_offset(self, i: int) -> int:
        return sum(p[0].dim for p in self._patches[:i - 1])

    def unit_component(self, i: int) -> tuple:
        """Coordinates of pi_i(1) inside (+)A_i."""
        f = self.field
        out = [f.zero] * self.b_algebra.dim
        off = self.patch_offset(i)
        for k, x in enumerate(self._patches[i - 1][0].unit):
            out[off + k] = x
        return tuple(out)


def is_covering(c: Covering) -> bool:
    return ideal_intersection(list(c.ideals)).dim == 0


def build_pi(c: Covering) -> Matrix:
    """pi = (+)_i pi_i : A -> (+)A_i as a stacked block column."""
    mats = [c.patch(i)[1].matrix for i in range(1, c.n_patches + 1)]
    out = mats[0]
    for m in mats[1:]:
        out = out.vstack(m)
    return out


def build_tau(c: Covering) -> Matrix:
    """tau : (+)A_i -> (+)_(i<j) A_ij, block row (i,j) = pi_i_ij - pi_j_ij."""
    col_dims = list(c.patch_dims())
    keys = sorted(c._pairs)
    row_dims = [c._pairs[k][0].dim for k in keys]
    blocks = {}
    for r, (i, j) in enumerate(keys):
        _, _, pi_a, pi_b = c._pairs[(i, j)]
        blocks[(r, i - 1)] = pi_a.matrix
        blocks[(r, j - 1)] = pi_b.matrix.neg()
    if not keys:
        return Matrix(c.field, 0, sum(col_dims), tuple())
    return block_matrix(c.field, row_dims, col_dims, blocks)


def completeness_check(c: Covering) -> CompletenessReport:
    """Exactness of 0 -> A -> (+)A_i -> (+)A_ij at A and at (+)A_i."""
    inter = ideal_intersection(list(c.ideals))
    covering = inter.dim == 0
    pi = build_pi(c)
    tau = build_tau(c)
    im_pi = image_basis(pi)
    ker_tau = kernel_basis(tau)
    exact_at_a = covering  # ker pi = intersection of the ideals
    exact_at_b = ker_tau == im_pi
    return CompletenessReport(
        is_covering=covering,
        intersection_dim=inter.dim,
        exact_at_a=exact_at_a,
        exact_at_b=exact_at_b,
        ker_tau_dim=ker_tau.dim,
        im_pi_dim=im_pi.dim,
        complete=covering and exact_at_a and exact_at_b,
    )


# ---------------------------------------------------------------------------
# Random instances (property suites; incomplete-covering search)
# ---------------------------------------------------------------------------

_STOCK = (
    lambda f: split_commutative(f, 2),
    lambda f: split_commutative(f, 3),
    lambda f: matrix_algebra(f, 2),
    lambda f: upper_triangular(f, 2),
    lambda f: truncated_polynomial(f, 2),
    lambda f: truncated_polynomial(f, 3),
    lambda f: square_zero(f, 1),
    lambda f: square_zero(f, 2),
    lambda f: square_zero(f, 3),
)


def random_algebra(rng: random.Random, field: Field, max_dim: int = 6) -> Algebra:
    """Random direct sum of stock algebras with total dimension <= max_dim."""
    acc = None
    dim = 0
    while True:
        candidates = [mk for mk in _STOCK if dim + mk(field).dim <= max_dim]
        if not candidates or (acc is not None and rng.random() < 0.45):
            break
        piece = rng.choice(candidates)(field)
        acc = piece if acc is None else direct_sum(acc, piece)
        dim = acc.dim
    if acc is None:
        acc = split_commutative(field, min(2, max_dim))
    return acc


def _random_ideal(rng: random.Random, a: Algebra) -> Ideal:
    gens = []
    for _ in range(rng.randint(0, 2)):
        coords = [a.field.zero] * a.dim
        for _ in range(rng.randint(1, 2)):
            i = rng.randrange(a.dim)
            coords[i] = a.field.coerce(rng.choice([1, 1, 1, -1, 2]))
        gens.append(tuple(coords))
    return ideal_closure(a, gens)


def random_covering(rng: random.Random, field: Field, max_dim: int = 6,
                    max_patches: int = 3, attempts: int = 200) -> Covering:
    """Random covering (zero ideal intersection); falls back to zero ideals."""
    for _ in range(attempts):
        a = random_algebra(rng, field, max_dim)
        n = rng.randint(1, max_patches)
        ideals = [_random_ideal(rng, a) for _ in range(n)]
        if ideal_intersection(ideals).dim == 0:
            return Covering(a, ideals)
    a = random_algebra(rng, field, max_dim)
    zero = ideal_closure(a, [])
    return Covering(a, [zero] * rng.randint(1, max_patches))


def search_incomplete_covering(rng: random.Random, field: Field,
                               attempts: int = 300, max_dim: int = 5,
                               max_patches: int = 3) -> Optional[Covering]:
    """Hunt for a covering that fails exactness at (+)A_i.

    Returns the first incomplete covering found, or None if the budget runs
    out.  Incompleteness needs N >= 3 (two ideals always glue), so the
    search favors three patches.
    """
    for _ in range(attempts):
        a = random_algebra(rng, field, max_dim)
        n = rng.randint(3, max(3, max_patches))
        ideals = [_random_ideal(rng, a) for _ in range(n)]
        if ideal_intersection(ideals).dim != 0:
            continue
        c = Covering(a, ideals)
        report = completeness_check(c)
        if report.is_covering and not report.complete:
            return c
    return None
