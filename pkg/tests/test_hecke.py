import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfsim.errors import LevelTooLarge, MissingLabel, PoleAtBeta
from selfsim.group import BoundaryPoint, act_vertex
from selfsim.hecke import (
    AlgebraElement,
    assemble_level,
    assemble_orbital,
    assemble_q_param,
    delta_element,
    generator_sum_element,
    groupoid_block,
    level_generator_matrices,
    schur_step_check,
    word_perm,
)
from selfsim.schreier import orbital_ball
from selfsim.spectra import sym_eigvals

ABCD = ("a", "b", "c", "d")


def test_level_zero_and_one_matrices():
    L0 = level_generator_matrices(0)
    for g in ABCD:
        assert np.array_equal(L0.matrix(g), [[1]])
    L1 = level_generator_matrices(1)
    assert np.array_equal(L1.A, [[0, 1], [1, 0]])
    for g in "bcd":
        assert np.array_equal(L1.matrix(g), np.eye(2))


def test_level_two_block_recursion():
    L1 = level_generator_matrices(1)
    L2 = level_generator_matrices(2)
    Z = np.zeros((2, 2))
    assert np.array_equal(L2.A, np.block([[Z, np.eye(2)], [np.eye(2), Z]]))
    assert np.array_equal(L2.B, np.block([[L1.A, Z], [Z, L1.matrix("c")]]))
    assert np.array_equal(L2.C, np.block([[L1.A, Z], [Z, L1.matrix("d")]]))
    assert np.array_equal(L2.D, np.block([[np.eye(2), Z], [Z, L1.B]]))


def test_perms_match_vertex_action():
    for n in range(11):
        strings = [format(i, f"0{n}b") if n else "" for i in range(1 << n)]
        index = {s: i for i, s in enumerate(strings)}
        for g in ABCD:
            perm = word_perm(g, n)
            for i, s in enumerate(strings):
                assert perm[i] == index[act_vertex(g, s)]


def test_word_perm_relations():
    n = 7
    identity = np.arange(1 << n)
    for g in ABCD:
        p = word_perm(g, n)
        assert np.array_equal(p[p], identity)
    assert np.array_equal(word_perm("bc", n), word_perm("d", n))
    assert np.array_equal(word_perm("bd", n), word_perm("c", n))
    assert np.array_equal(word_perm("cd", n), word_perm("b", n))
    assert np.array_equal(word_perm("adadadad", n), identity)


def test_level_guard():
    with pytest.raises(LevelTooLarge):
        assemble_level(delta_element(), 14)


def test_algebra_element_merges_and_serializes():
    e = AlgebraElement.from_terms([("a", 1.0), ("b", 2.0), ("a", 0.5)])
    assert e.coefficient("a") == 1.5
    assert e.coefficient("adadadad") == 0.0
    merged = AlgebraElement.from_terms([("adadadad", 3.0), ("", 1.0)])
    assert merged.coefficient("") == 4.0
    assert AlgebraElement.from_json(e.to_json()) == e
    assert delta_element().is_self_adjoint()
    assert generator_sum_element().is_self_adjoint()
    assert AlgebraElement.from_terms([("ab", 1.0)]).is_self_adjoint() is False


@given(st.lists(st.tuples(st.text(alphabet="abcd", max_size=4),
                          st.integers(min_value=-3, max_value=3).map(float)),
                max_size=5))
def test_algebra_element_roundtrip(terms):
    element = AlgebraElement.from_terms(terms)
    assert AlgebraElement.from_json(element.to_json()) == element


def test_delta_spectra_small_levels():
    ev1 = sym_eigvals(assemble_level(delta_element(), 1).entries)
    assert np.allclose(sorted(ev1), [0.5, 1.0], atol=1e-14)
    ev2 = sym_eigvals(assemble_level(delta_element(), 2).entries)
    golden = sorted([(1 - 5**0.5) / 4, 0.5, (1 + 5**0.5) / 4, 1.0])
    assert np.allclose(sorted(ev2), golden, atol=1e-14)


def test_sum_is_exactly_four_delta():
    for n in range(7):
        four_delta = 4 * assemble_level(delta_element(), n).entries
        total = assemble_level(generator_sum_element(), n).entries
        assert np.array_equal(four_delta, total)


def test_q_param_examples():
    q1 = assemble_q_param(-1.0, 0.0, 1)
    assert np.allclose(sorted(sym_eigvals(q1.entries)), [1.0, 3.0], atol=1e-14)
    q0 = assemble_q_param(0.0, -1.0, 0)
    assert np.array_equal(q0.entries, [[3.0]])
    q2 = assemble_q_param(-1.0, -1.0, 2)
    assert np.array_equal(q2.entries, assemble_level(generator_sum_element(), 2).entries)


def test_identity_on_diagonal():
    ident = AlgebraElement.from_terms([("", 2.5)])
    M = assemble_level(ident, 3)
    assert np.array_equal(M.entries, 2.5 * np.eye(8))
    assert M.is_symmetric()


def test_operator_matrix_csv_and_meta():
    M = assemble_level(delta_element(), 1)
    assert M.to_csv() == "0.75,0.25\n0.25,0.75\n"
    assert '"dim": 2' in M.meta_json() and '"level": 1' in M.meta_json()


def test_schur_step_identity():
    rng = np.random.default_rng(11)
    count = 0
    while count < 25:
        alpha, beta = rng.uniform(-2.5, 2.5, 2)
        if min(abs(beta - 2.0), abs(beta + 2.0)) < 0.1:
            continue
        for n in (1, 2, 3):
            report = schur_step_check(alpha, beta, n, 1e-12)
            assert report.ok, (alpha, beta, n, report.max_residual)
        count += 1


def test_schur_step_pole():
    with pytest.raises(PoleAtBeta):
        schur_step_check(1.0, 2.0, 2, 1e-12)


def test_groupoid_block_doubles_spectrum():
    for n in (1, 3):
        element = delta_element()
        level_eigs = np.sort(sym_eigvals(assemble_level(element, n).entries))
        block_eigs = np.sort(sym_eigvals(groupoid_block(element, n).entries))
        assert np.allclose(block_eigs, np.sort(np.repeat(level_eigs, 2)), atol=1e-12)


def test_assemble_orbital_examples():
    ones = BoundaryPoint.parse("(1)")
    ball0 = orbital_ball(ones, ABCD, 0, 64)
    M, flags = assemble_orbital(delta_element(), ball0)
    assert M.dim == 1 and M.entries[0, 0] == 0.75
    assert flags.any()

    ident = AlgebraElement.from_terms([("", 1.0)])
    Mi, fi = assemble_orbital(ident, ball0)
    assert np.array_equal(Mi.entries, [[1.0]]) and not fi.any()

    with pytest.raises(MissingLabel):
        assemble_orbital(delta_element(), orbital_ball(ones, ("b", "c", "d"), 0, 64))


def test_assemble_orbital_interior_rows_exact():
    ones = BoundaryPoint.parse("(1)")
    ball = orbital_ball(ones, ABCD, 8, 80)
    M, flags = assemble_orbital(delta_element(), ball)
    assert M.is_symmetric()
    # interior rows sum to 1: the four quarter-weight images all stay inside
    row_sums = M.entries.sum(axis=1)
    for i, flagged in enumerate(flags):
        if not flagged:
            assert abs(row_sums[i] - 1.0) < 1e-15


def test_assemble_orbital_soft_spectrum():
    ones = BoundaryPoint.parse("(1)")
    ball = orbital_ball(ones, ABCD, 64, 192)
    M, _ = assemble_orbital(delta_element(), ball)
    ev = sym_eigvals(M.entries)
    assert ev.min() >= -0.6 and ev.max() <= 1.1


def test_nesting_other_element():
    element = AlgebraElement.from_terms([("a", 1.0), ("b", -1.0), ("c", 2.0)])
    prev = None
    for n in range(1, 7):
        eigs = np.sort(sym_eigvals(assemble_level(element, n).entries))
        if prev is not None:
            gaps = np.abs(prev[:, None] - eigs[None, :]).min(axis=1)
            assert gaps.max() <= 1e-9
        prev = eigs
