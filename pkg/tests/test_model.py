import pytest
from hypothesis import given
from hypothesis import strategies as st

from flashlab.model import (
    CodeParams,
    Status,
    format_state,
    index_ilifc,
    index_layered,
    is_higher,
    is_live,
    layered_status,
    parity,
    parse_state,
    status,
    weight,
)


@st.composite
def subblocks(draw, max_k=6, max_q=8):
    k = draw(st.sampled_from([k for k in range(2, max_k + 1, 2)]))
    q = draw(st.integers(2, max_q))
    x = tuple(draw(st.lists(st.integers(0, q - 1), min_size=k, max_size=k)))
    return x, q


@pytest.mark.parametrize("x, w", [((2, 1, 1, 0), 4), ((0, 0, 0, 0), 0), ((1, 2), 3)])
def test_weight(x, w):
    assert weight(x) == w


@pytest.mark.parametrize("x, p", [((2, 1, 1, 0), 0), ((1, 0, 0, 0), 1), ((2, 2, 2, 2), 0)])
def test_parity(x, p):
    assert parity(x) == p


def test_status_examples():
    assert status((0, 0, 0, 0), 3) is Status.EMPTY
    assert layered_status((0, 0, 0, 0), 3) == (Status.CLEAR, 0)
    assert status((2, 2, 2, 2), 3) is Status.FULL
    assert layered_status((2, 2, 2, 2), 3) == (Status.CLEAR, 2)
    assert status((1, 1, 2, 1), 3) is Status.ACTIVE
    assert layered_status((1, 1, 2, 1), 3) == (Status.ACTIVE, -1)


@pytest.mark.parametrize("x, i", [
    ((0, 0, 0, 0), 0),
    ((1, 0, 0, 0), 1),
    ((0, 1, 1, 0), 2),
    ((2, 2, 1, 0), 1),
])
def test_index_ilifc(x, i):
    assert index_ilifc(x) == i


@pytest.mark.parametrize("x, i", [((1, 1, 1, 1), 0), ((1, 2, 2, 1), 2), ((0, 0, 1, 0), 3)])
def test_index_layered(x, i):
    assert index_layered(x) == i


def test_index_tie_breaks_to_smallest():
    # diffs (1, -1, 1, -1): positions 1 and 3 tie
    assert index_ilifc((1, 0, 1, 0)) == 1


def test_is_higher():
    assert is_higher((1, 1, 0, 0), (1, 0, 0, 0))
    assert is_higher((1, 0, 2), (1, 0, 2))
    assert not is_higher((1, 0), (0, 1))
    with pytest.raises(ValueError):
        is_higher((1, 0), (1, 0, 0))


def test_params_geometry():
    p = CodeParams(n=10, k=4, q=3)
    assert p.m == 2
    assert list(p.subblocks(tuple(range(10)))) == [(0, 1, 2, 3), (4, 5, 6, 7)]
    p.check((0,) * 8 + (0, 0))
    with pytest.raises(ValueError):
        p.check((0,) * 8 + (1, 0))
    with pytest.raises(ValueError):
        p.check((3,) + (0,) * 9)


@pytest.mark.parametrize("n, k, q", [(4, 3, 2), (4, 0, 2), (4, 2, 1), (1, 2, 2)])
def test_params_rejects(n, k, q):
    with pytest.raises(ValueError):
        CodeParams(n, k, q)


def test_state_roundtrip():
    assert format_state((2, 1, 1, 0)) == "2,1,1,0"
    assert parse_state("2,1,1,0") == (2, 1, 1, 0)


@given(subblocks())
def test_parity_is_weight_mod_2(xq):
    x, _ = xq
    assert parity(x) == weight(x) % 2


@given(subblocks())
def test_status_partition(xq):
    x, q = xq
    flags = [all(c == 0 for c in x), all(c == q - 1 for c in x)]
    st_ = status(x, q)
    assert sum(flags) + (st_ is Status.ACTIVE) == 1
    assert is_live(x, q) == (st_ is not Status.FULL)
    kind, layer = layered_status(x, q)
    if kind is Status.CLEAR and 0 < layer < q - 1:
        # intermediate layers are active in the original view
        assert st_ is Status.ACTIVE
    if kind is Status.CLEAR:
        assert parity(x) == 0
        assert index_layered(x) == 0
