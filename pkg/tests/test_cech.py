from __future__ import annotations

import random
from itertools import combinations

import pytest

from cechcover.algebras import (
    AlgebraHom, Ideal, ideal_closure, matrix_algebra, quotient, split_commutative,
)
from cechcover.amitsur import TensorTower
from cechcover.cech import (
    CechElement, RingedStructure,
    all_tuples, build_cech, cech_cohomology, constant_functor, default_phi_choice,
    functor_from_ringed_covering, insert_index, phi, phi_matrix, phi_on_pure,
    phi_raw_matrix, phi_sum, space_layout, validate_functor, validate_index_tuple,
    verify_chain_map,
)
from cechcover.coverings import Covering, build_tau, random_covering
from cechcover.errors import StructureError
from cechcover.linalg import (
    GF, QQ, Matrix, Subspace, kernel_basis, quotient_section, rank, subspace_sum,
)

from instances import make_e1


# -- index combinatorics -----------------------------------------------------------

def test_index_tuple_validation():
    assert validate_index_tuple((1, 3), 4) == (1, 3)
    with pytest.raises(ValueError):
        validate_index_tuple((3, 1), 4)
    with pytest.raises(ValueError):
        validate_index_tuple((0, 1), 4)
    assert validate_index_tuple((), 4) == ()


def test_insert_index_positions():
    assert insert_index((2,), 1) == (0, (1, 2))
    assert insert_index((1,), 2) == (1, (1, 2))
    assert insert_index((1, 3), 2) == (1, (1, 2, 3))


def test_two_path_sign_cancellation_exhaustive():
    # for every zeta inside theta with two extra indices, the two insertion
    # orders carry opposite total signs
    for n_patches in range(2, 7):
        universe = range(1, n_patches + 1)
        for size in range(n_patches - 1):
            for zeta in combinations(universe, size):
                rest = [i for i in universe if i not in zeta]
                for a, b in combinations(rest, 2):
                    pa, za = insert_index(zeta, a)
                    pb, _ = insert_index(za, b)
                    qb, zb = insert_index(zeta, b)
                    qa, _ = insert_index(zb, a)
                    assert (-1) ** (pa + pb) + (-1) ** (qb + qa) == 0


# -- constant functors ---------------------------------------------------------------

def line():
    return split_commutative(QQ, 1)


def test_constant_functor_coboundary_signs():
    # S^1 -> S^2 for N = 2: x = (a, b) goes to b - a on the pair block
    cx = build_cech(constant_functor(2, line()))
    assert cx.differentials[1].to_lists() == [[-1, 1]]


def test_constant_functor_point_pattern():
    for n in range(2, 6):
        dims = cech_cohomology(build_cech(constant_functor(n, line())))
        assert dims == [1] + [0] * (n - 1)


def test_constant_functor_matrix_ring_scales():
    m2 = matrix_algebra(QQ, 2)
    for n in (2, 3):
        dims = cech_cohomology(build_cech(constant_functor(n, m2)))
        assert dims == [4] + [0] * (n - 1)


def test_single_patch_functor():
    a = split_commutative(QQ, 3)
    c = Covering(a, [ideal_closure(a, [])])
    f = functor_from_ringed_covering(c)
    assert cech_cohomology(build_cech(f)) == [3]


def test_constant_functor_single_ring():
    assert cech_cohomology(build_cech(constant_functor(1, line()))) == [1]


# -- ringed coverings ------------------------------------------------------------------

def test_e1_default_ringed_dims(e1):
    f = functor_from_ringed_covering(e1)
    assert f.ring(()).dim == 3
    assert f.ring((1,)).dim == 2
    assert f.ring((2,)).dim == 2
    assert f.ring((1, 2)).dim == 1


def test_e1_dprime_is_tau_up_to_sign(e1):
    f = functor_from_ringed_covering(e1)
    cx = build_cech(f)
    assert cx.differentials[1] == build_tau(e1).neg()
    assert rank(cx.differentials[1]) == 1


def test_e1_cech_cohomology(e1):
    assert cech_cohomology(build_cech(functor_from_ringed_covering(e1))) == [3, 0]


def test_e4_ringed_dims_and_cohomology(e4):
    f = functor_from_ringed_covering(e4)
    assert f.ring((1,)).dim == 1
    assert f.ring((2,)).dim == 4
    assert f.ring((1, 2)).dim == 0
    assert cech_cohomology(build_cech(f)) == [5]


def test_functor_validation_catches_bad_square():
    ring = split_commutative(QQ, 2)
    f = constant_functor(2, ring)
    swap = AlgebraHom(ring, ring, Matrix.from_rows(QQ, [[0, 1], [1, 0]]))
    f.steps[((1,), (1, 2))] = swap
    with pytest.raises(StructureError) as err:
        validate_functor(f)
    assert err.value.witness[0] == "square"


def test_custom_ringed_structure_naturality(e1):
    # Phi(J) = A/(J + I0) with I0 = <e2>: a ringed structure that collapses
    # the shared coordinate.  Naturality squares still commute.
    base = e1.algebra
    extra = ideal_closure(base, [(0, 1, 0)]).space

    def fat(j: Subspace) -> Subspace:
        return subspace_sum(j, extra)

    def ring_of(j):
        return quotient(base, Ideal(base, fat(j)))[0]

    def hom_from_quotient(j):
        small, _ = quotient(base, Ideal(base, j))
        big, qb = quotient(base, Ideal(base, fat(j)))
        return AlgebraHom(small, big, qb.matrix.mul(quotient_section(base.dim, j)))

    def map_of(j1, j2):
        a1, _ = quotient(base, Ideal(base, fat(j1)))
        a2, q2 = quotient(base, Ideal(base, fat(j2)))
        return AlgebraHom(a1, a2, q2.matrix.mul(quotient_section(base.dim, fat(j1))))

    rs = RingedStructure(base, ring_of, hom_from_quotient, map_of, name="collapse-e2")
    f = functor_from_ringed_covering(e1, rs)
    assert f.ring(()).dim == 2
    assert f.ring((1,)).dim == 1 and f.ring((2,)).dim == 1
    assert f.ring((1, 2)).dim == 0
    assert cech_cohomology(build_cech(f)) == [2]


# -- phi ---------------------------------------------------------------------------------

def test_phi_e1_product_in_pair_ring(e1):
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    el = phi(f, choice, [(1, (1, 2)), (2, (3, 4))])
    assert el.component((1, 2), f).coords == (QQ.coerce(6),)


def test_phi_kills_repeated_indices(e1):
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    el = phi(f, choice, [(1, (1, 2)), (1, (3, 4))])
    assert all(x == QQ.zero for x in el.coords)


def test_phi_kills_out_of_order_words(e1):
    # order-inherited reading of "ordered subsets": a word that is distinct
    # but unsorted is not one, and phi sends it to zero; this is what keeps
    # phi well defined and a chain map (the signed-sorting alternative
    # breaks the degree-1 square even on E1).
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    el = phi(f, choice, [(2, (3, 4)), (1, (1, 2))])
    assert all(x == QQ.zero for x in el.coords)


def test_phi_degree_one_is_the_chosen_hom(e1):
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    el = phi(f, choice, [(1, (5, 7))])
    assert el.component((1,), f).coords == (QQ.coerce(5), QQ.coerce(7))


def test_phi_kills_balancing_relation_elements(e1):
    # (y . pi_1(a)) (x) y' - y (x) (pi_2(a) . y') maps to zero under phi
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    a1, pi1 = e1.patch(1)
    a2, pi2 = e1.patch(2)
    rng = random.Random(53)
    for _ in range(10):
        y = tuple(QQ.coerce(rng.randint(-3, 3)) for _ in range(a1.dim))
        yp = tuple(QQ.coerce(rng.randint(-3, 3)) for _ in range(a2.dim))
        a = tuple(QQ.coerce(rng.randint(-3, 3)) for _ in range(e1.algebra.dim))
        left = a1.multiply(y, pi1.apply(a))
        right = a2.multiply(pi2.apply(a), yp)
        el = phi_sum(f, choice, [(1, [(1, left), (2, yp)]), (-1, [(1, y), (2, right)])])
        assert all(x == QQ.zero for x in el.coords)


def test_phi_from_raw_coordinates_via_decompose(e1):
    # raw balanced coordinates -> weighted pure tensors -> phi agrees with
    # the matrix route
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    tower = TensorTower(e1)
    rng = random.Random(67)
    coords = tuple(QQ.coerce(rng.randint(-3, 3)) for _ in range(tower.space(2).dim))
    terms = []
    for coeff, factors in tower.decompose(2, coords):
        pure = []
        for patch, local in factors:
            block = tower.base.block_by_word((patch,))
            v = [QQ.zero] * block.dim
            v[local] = QQ.one
            pure.append((patch, tuple(v)))
        terms.append((coeff, pure))
    via_decompose = phi_sum(f, choice, terms, degree=2)
    via_matrix = phi_matrix(f, choice, tower, 2).apply(coords)
    assert via_decompose.coords == via_matrix


def test_phi_matrix_well_defined_on_quotient(e1):
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    tower = TensorTower(e1)
    for n in (1, 2, 3):
        raw = phi_raw_matrix(f, choice, tower, n)
        for v in kernel_basis(tower.flat(n)).basis.entries:
            assert all(x == QQ.zero for x in raw.apply(v))
        # the quotient matrix reproduces phi on pure tensors
        quot = phi_matrix(f, choice, tower, n)
        assert quot.mul(tower.flat(n)) == raw


def test_chain_map_e1(e1):
    f = functor_from_ringed_covering(e1)
    report = verify_chain_map(f, default_phi_choice(f, e1), e1, 2)
    assert report.passed
    assert all(ch.ok for ch in report.squares)
    assert all(ch.ok for ch in report.well_defined)


def test_chain_map_e4(e4):
    f = functor_from_ringed_covering(e4)
    report = verify_chain_map(f, default_phi_choice(f, e4), e4, 2)
    assert report.passed


def test_chain_map_trivial_covering():
    a = split_commutative(QQ, 2)
    c = Covering(a, [ideal_closure(a, [])])
    f = functor_from_ringed_covering(c)
    report = verify_chain_map(f, default_phi_choice(f, c), c, 2)
    assert report.passed


def test_chain_map_over_f5():
    c = make_e1(GF(5))
    f = functor_from_ringed_covering(c)
    report = verify_chain_map(f, default_phi_choice(f, c), c, 2)
    assert report.passed


def test_random_ringed_functors_validate_and_square_to_zero():
    rng = random.Random(59)
    for field in (QQ, GF(5)):
        for _ in range(5):
            c = random_covering(rng, field, max_dim=5, max_patches=3)
            f = functor_from_ringed_covering(c)  # validates internally
            build_cech(f)  # asserts d'.d' = 0


def test_phi_on_pure_rejects_nothing_quietly(e1):
    f = functor_from_ringed_covering(e1)
    choice = default_phi_choice(f, e1)
    assert phi_on_pure(f, choice, [(1, (1, 0)), (2, (0, 1))]) is not None
    assert phi_on_pure(f, choice, [(2, (0, 1)), (1, (1, 0))]) is None


def test_cech_element_component_accessor(e1):
    f = functor_from_ringed_covering(e1)
    layout = space_layout(f, 1)
    el = CechElement(layout, (QQ.coerce(1), QQ.coerce(2), QQ.coerce(3), QQ.coerce(4)))
    assert el.component((2,), f).coords == (QQ.coerce(3), QQ.coerce(4))


def test_all_tuples_ordering():
    assert all_tuples(3, 2) == [(1, 2), (1, 3), (2, 3)]
    assert all_tuples(3, 0) == [()]
