from fractions import Fraction

import sympy as sp
from hypothesis import given, settings, strategies as st

from ipw import linalg

vectors = st.lists(
    st.dictionaries(st.integers(0, 5), st.fractions(min_value=-3, max_value=3,
                                                    max_denominator=4), max_size=4),
    max_size=6)


def dense(vecs, ncols=6):
    return sp.Matrix([[sp.Rational(v.get(k, 0)) for k in range(ncols)] for v in vecs]) \
        if vecs else sp.zeros(0, ncols)


@settings(max_examples=80, deadline=None)
@given(vectors)
def test_rank_matches_sympy(vecs):
    assert linalg.rank(vecs) == dense(vecs).rank()


@settings(max_examples=80, deadline=None)
@given(vectors)
def test_nullspace_is_a_kernel_basis(vecs):
    basis = linalg.nullspace(vecs)
    assert len(basis) == len(vecs) - dense(vecs).rank()
    for c in basis:
        assert linalg.combine(c, vecs) == {}
    assert linalg.rank(basis) == len(basis)


@settings(max_examples=60, deadline=None)
@given(vectors, st.sets(st.integers(0, 5)))
def test_intersect_zero(vecs, constrained):
    out = linalg.intersect_zero(vecs, lambda k: k in constrained)
    for v in out:
        assert all(v.get(k, 0) == 0 for k in constrained)
        assert linalg.in_span(vecs, v)
    # expected dimension: rank of the combinations that kill the constrained columns
    if vecs:
        M = dense(vecs)
        keep = sorted(constrained)
        kernel = M[:, keep].T.nullspace() if keep else list(sp.eye(len(vecs)).columnspace())
        expected = (sp.Matrix.hstack(*kernel).T * M).rank() if kernel else 0
        assert len(out) == expected
    else:
        assert out == []


def test_kernel_vectors_and_echelon():
    keys = ["a", "b", "c"]
    cons = {"a": {0: 1}, "b": {0: 1}, "c": {1: Fraction(1, 2)}}
    ker = linalg.kernel_vectors(keys, cons.__getitem__)
    assert ker == [{"b": 1, "a": -1}] or ker == [{"a": -1, "b": 1}]
    ech = linalg.Echelon()
    assert ech.add({"u": 2, "v": 4}) and not ech.add({"u": 1, "v": 2})
    assert ech.contains({"u": -3, "v": -6}) and not ech.contains({"w": 1})
    assert linalg.span_basis([{0: 1}, {0: 2}, {1: 1}]) == [{0: 1}, {1: 1}]
