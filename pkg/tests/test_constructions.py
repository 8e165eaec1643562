from __future__ import annotations

from itertools import product as iproduct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mult_quandle
from oracles import brute_connected, brute_irreducible, cocycle_ok
from quandle_lab.constructions import (
    AlexanderSpec,
    Cocycle2,
    GroupModel,
    abelian_extension,
    abelian_group,
    alexander_field,
    alexander_general,
    coboundary,
    cocycle_basis,
    conjugation_quandle,
    cyclic_group,
    dihedral_quandle,
    field_generators,
    find_connected_extensions,
    galkin_quandle,
    generalized_alexander,
    inner_automorphism,
    irreducible_polynomials,
    is_irreducible,
    is_simple_alexander,
    monic_polynomials,
    residue_inverse,
    symmetric_group,
    trivial_quandle,
    validate_cocycle,
    zero_cocycle,
)
from quandle_lab.core import check_axioms, dual, find_isomorphism, is_connected, product, properties
from quandle_lab.errors import CapExceeded, InvalidCocycle, QuandleLabError

F4 = AlexanderSpec(2, (1, 1, 1))


# -- groups -----------------------------------------------------------------


def test_group_model_rejects_non_group():
    with pytest.raises(QuandleLabError):
        GroupModel([[0, 1], [0, 1]])


def test_symmetric_group_orders():
    assert symmetric_group(3)[0].order == 6
    assert symmetric_group(4)[0].order == 24
    assert not symmetric_group(3)[0].is_abelian()


def test_abelian_group_product():
    G = abelian_group([2, 2])
    assert G.order == 4 and G.is_abelian()


# -- basic families -----------------------------------------------------------


def test_trivial_examples():
    assert trivial_quandle(1).table.tolist() == [[0]]
    assert trivial_quandle(3).table.tolist() == [[0, 0, 0], [1, 1, 1], [2, 2, 2]]
    # the two-element quandle is unique: brute force over all 2x2 tables
    valid = [t for t in iproduct(range(2), repeat=4) if not check_axioms(np.array(t).reshape(2, 2))]
    assert [list(np.array(t).reshape(2, 2).tolist()) for t in valid] == [trivial_quandle(2).table.tolist()]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_alexander_t_plus_one_is_dihedral(p):
    assert alexander_field(AlexanderSpec(p, (1, 1))) == dihedral_quandle(p)


def test_alexander_f4():
    Q = alexander_field(F4)
    assert Q.order == 4 and not check_axioms(Q)
    props = properties(Q)
    assert props.connected and props.latin


def test_alexander_field_errors():
    with pytest.raises(QuandleLabError):
        AlexanderSpec(4, (1, 1))
    with pytest.raises(QuandleLabError):
        AlexanderSpec(2, (1, 1, 0))
    with pytest.raises(QuandleLabError):
        alexander_field(AlexanderSpec(3, (0, 1)))


def test_alexander_general_examples():
    Z3, Z4, Z5 = cyclic_group(3), cyclic_group(4), cyclic_group(5)
    assert alexander_general(Z3, [0, 2, 1]) == dihedral_quandle(3)
    assert alexander_general(Z4, [0, 1, 2, 3]) == trivial_quandle(4)
    Q = alexander_general(Z5, [(2 * x) % 5 for x in range(5)])
    assert is_connected(Q)
    assert Q.table.tolist() == [[(2 * x - y) % 5 for y in range(5)] for x in range(5)]


def test_alexander_general_errors():
    S3 = symmetric_group(3)[0]
    with pytest.raises(QuandleLabError):
        alexander_general(S3, list(range(6)))
    with pytest.raises(QuandleLabError):
        alexander_general(cyclic_group(4), [0, 2, 0, 2])


def test_generalized_alexander_examples():
    S3, elements = symmetric_group(3)
    transposition = elements.index((1, 0, 2))
    Q = generalized_alexander(S3, inner_automorphism(S3, transposition))
    assert Q.order == 6 and not check_axioms(Q)
    assert generalized_alexander(S3, list(range(6))) == trivial_quandle(6)
    V = abelian_group([2, 2])  # (a, b) encoded as 2a + b
    swap = [0, 2, 1, 3]
    K = generalized_alexander(V, swap)
    assert not check_axioms(K) and properties(K).kei


def test_conjugation_examples():
    S3, elements = symmetric_group(3)
    Q, cls = conjugation_quandle(S3, elements.index((1, 0, 2)))
    assert len(cls) == 3 and find_isomorphism(Q, dihedral_quandle(3)) is not None
    Q1, _ = conjugation_quandle(cyclic_group(5), 3)
    assert Q1 == trivial_quandle(1)
    S4, el4 = symmetric_group(4)
    Q6, cls6 = conjugation_quandle(S4, el4.index((1, 2, 3, 0)))
    assert Q6.order == 6 and not check_axioms(Q6)


def test_galkin_examples():
    assert find_isomorphism(galkin_quandle(abelian_group([1]), [0, 0, 0]), dihedral_quandle(3)) is not None
    Q = galkin_quandle(cyclic_group(2), [0, 0, 0])
    assert Q.order == 6 and not check_axioms(Q)
    Q9 = galkin_quandle(cyclic_group(3), [0, 1, 2])
    assert Q9.order == 9 and not check_axioms(Q9)


def test_galkin_tau_zero_required():
    with pytest.raises(QuandleLabError):
        galkin_quandle(cyclic_group(2), [1, 0, 0])


@pytest.mark.parametrize("orders", [[1], [2], [3], [4], [2, 2]])
def test_galkin_self_dual(orders):
    A = abelian_group(orders)
    for t1, t2 in iproduct(range(A.order), repeat=2):
        Q = galkin_quandle(A, [0, t1, t2])
        assert not check_axioms(Q)
        assert find_isomorphism(Q, dual(Q)) is not None


# -- cocycles and extensions ------------------------------------------------


def test_zero_cocycle_valid(R3):
    assert validate_cocycle(R3, 2, np.zeros((3, 3), dtype=int)).modulus == 2


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 4, 5]), st.integers(2, 5), st.data())
def test_coboundaries_are_cocycles(n, m, data):
    base = dihedral_quandle(n)
    psi = data.draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    values = coboundary(base, psi, m)
    assert cocycle_ok(base.table.tolist(), m, values.tolist())
    validate_cocycle(base, m, values)


def test_diagonal_violation(R3):
    values = np.zeros((3, 3), dtype=int)
    values[0, 0] = 1
    with pytest.raises(InvalidCocycle) as exc:
        validate_cocycle(R3, 2, values)
    assert ("diagonal", 0) in exc.value.violations


def test_cocycle_shape_mismatch(R3):
    with pytest.raises(QuandleLabError):
        validate_cocycle(R3, 2, np.zeros((2, 2), dtype=int))


def test_zero_extension_is_product(R3):
    assert abelian_extension(zero_cocycle(R3, 2)) == product(R3, trivial_quandle(2))
    E = abelian_extension(zero_cocycle(trivial_quandle(2), 3))
    assert E.order == 6 and not is_connected(E)


def _brute_extension_classes(base, m):
    """Connected extensions of ``base`` by Z_m up to isomorphism, by scanning every table."""
    n = base.order
    T = base.table.tolist()
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    reps = []
    for vals in iproduct(range(m), repeat=len(off)):
        phi = [[0] * n for _ in range(n)]
        for (x, y), v in zip(off, vals):
            phi[x][y] = v
        if not cocycle_ok(T, m, phi):
            continue
        E = abelian_extension(Cocycle2(base, m, np.array(phi)))
        if not brute_connected(E.table.tolist()):
            continue
        if not any(find_isomorphism(E, R) is not None for R in reps):
            reps.append(E)
    return reps


def test_c4_extension_search_matches_brute_force(C4):
    found = find_connected_extensions(C4, 2)
    brute = _brute_extension_classes(C4, 2)
    assert len(found) == len(brute) >= 1
    for phi in found:
        E = abelian_extension(phi)
        assert E.order == 8 and is_connected(E) and not properties(E).kei
        assert any(find_isomorphism(E, R) is not None for R in brute)


def test_disconnected_base_has_no_connected_extension():
    assert find_connected_extensions(trivial_quandle(2), 2) == []
    assert _brute_extension_classes(trivial_quandle(2), 2) == []


def test_modulus_one_gives_zero_cocycle(R3):
    found = find_connected_extensions(R3, 1)
    assert len(found) == 1
    assert not found[0].values.any()
    assert abelian_extension(found[0]) == R3


def test_extension_search_caps(C4):
    with pytest.raises(CapExceeded):
        find_connected_extensions(dihedral_quandle(9), 2)
    with pytest.raises(CapExceeded):
        find_connected_extensions(C4, 4)


@pytest.mark.parametrize("p", [2, 3])
def test_cocycle_basis_solutions_are_cocycles(p, C4, R3):
    for base in (C4, R3):
        for vec in cocycle_basis(base, p):
            assert cocycle_ok(base.table.tolist(), p, vec.reshape(base.order, base.order).tolist())


# -- simple Alexander ---------------------------------------------------------


def test_is_simple_alexander_examples():
    assert is_simple_alexander(AlexanderSpec(2, (1, 1, 1)))
    assert not is_simple_alexander(AlexanderSpec(3, (2, 1)))  # t - 1
    assert not is_simple_alexander(AlexanderSpec(3, (2, 0, 1)))  # t^2 - 1


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_matches_brute_force(p, k):
    for h in monic_polynomials(p, k):
        assert is_irreducible(h, p) == brute_irreducible(h, p)
    assert irreducible_polynomials(p, k) == [tuple(h) for h in monic_polynomials(p, k) if brute_irreducible(h, p)]


@pytest.mark.parametrize("spec,count", [(AlexanderSpec(2, (1, 1, 1)), 2), (AlexanderSpec(2, (1, 1, 0, 1)), 6), (AlexanderSpec(3, (1, 0, 1)), 6)])
def test_field_generator_counts(spec, count):
    assert len(field_generators(spec)) == count


@pytest.mark.parametrize(
    "spec",
    [AlexanderSpec(2, (1, 1, 1)), AlexanderSpec(2, (1, 1, 0, 1)), AlexanderSpec(3, (1, 0, 1)), AlexanderSpec(3, (2, 1, 1)), AlexanderSpec(5, (2, 1))],
)
def test_dual_of_field_quandle_uses_inverse_multiplier(spec):
    for w in field_generators(spec) or [(0, 1)]:
        Q = alexander_field(spec, w)
        assert find_isomorphism(dual(Q), alexander_field(spec, residue_inverse(spec, w))) is not None


def test_simple_alexander_connected_and_latin():
    for p, k in [(2, 2), (2, 3), (3, 2), (5, 1), (7, 1)]:
        for h in irreducible_polynomials(p, k):
            spec = AlexanderSpec(p, h)
            if not is_simple_alexander(spec):
                continue
            props = properties(alexander_field(spec))
            assert props.connected and props.latin


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([5, 7, 11, 13]), st.data())
def test_affine_prime_quandles_valid(p, data):
    a = data.draw(st.integers(2, p - 1))
    Q = mult_quandle(p, a)
    assert not check_axioms(Q) and is_connected(Q)
