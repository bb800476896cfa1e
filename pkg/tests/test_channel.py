from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certcap.channel import (ChannelFormatError, ResourceCapError, certify_support,
                             exact_channel, load_channel, noiseless,
                             product_channel, typewriter)

F = Fraction


class TestLoading:
    def test_identity_rows(self):
        ch = load_channel({"inputs": [0, 1], "outputs": [0, 1], "mode": "exact",
                           "rows": [["1", "0"], ["0", "1"]]})
        assert ch.is_exact
        assert ch.entry(0, 0) == 1 and ch.entry(0, 1) == 0

    def test_pentagon_is_valid(self, pentagon):
        doc = pentagon.to_json()
        again = load_channel(doc)
        assert again.rows == pentagon.rows

    def test_non_stochastic_row_rejected(self):
        with pytest.raises(ChannelFormatError):
            load_channel({"inputs": [0, 1], "outputs": [0, 1], "mode": "exact",
                          "rows": [["1/2", "1/3"], ["0", "1"]]})

    def test_malformed_rational_rejected(self):
        with pytest.raises(Exception):
            load_channel({"inputs": [0], "outputs": [0], "mode": "exact",
                          "rows": [["0.9999"]]})

    def test_entry_outside_unit_interval_rejected(self):
        with pytest.raises(ChannelFormatError):
            exact_channel((0,), (0, 1), [[F(3, 2), F(-1, 2)]])

    def test_stream_round_trip(self, hover_channel):
        doc = hover_channel.to_json()
        again = load_channel(doc)
        assert again.schedules == hover_channel.schedules

    def test_stream_row_sum_must_contain_one(self):
        sched = [[((0, F(0), F(1, 4)),), ((0, F(0), F(1, 4)),)]]
        with pytest.raises(ChannelFormatError):
            load_channel({"inputs": [0], "outputs": [0, 1], "mode": "stream",
                          "schedules": [[[{"level": 0, "lo": "0", "hi": "1/4"}],
                                         [{"level": 0, "lo": "0", "hi": "1/4"}]]]})


class TestSupport:
    def test_bsc_all_positive(self, bsc14):
        cert = certify_support(bsc14)
        assert len(cert.positive) == 4 and not cert.zero and not cert.unresolved

    def test_pentagon_counts(self, pentagon):
        cert = certify_support(pentagon)
        assert len(cert.positive) == 10
        assert len(cert.zero) == 15
        assert not cert.unresolved

    def test_hovering_entry_never_resolves(self, hover_channel):
        for level in (0, 3, 17, 60):
            cert = certify_support(hover_channel, level)
            assert (0, 1) in cert.unresolved

    def test_monotone_in_level(self, pentagon_stream, hover_channel):
        for ch in (pentagon_stream, hover_channel):
            prev = certify_support(ch, 0)
            for level in range(1, ch.max_declared_level() + 1):
                cur = certify_support(ch, level)
                assert prev.positive <= cur.positive
                assert prev.zero <= cur.zero
                assert cur.unresolved <= prev.unresolved
                prev = cur


class TestProducts:
    def test_block_one_is_identity_on_entries(self, bsc14):
        prod = product_channel(bsc14, 1)
        assert prod.rows == bsc14.rows

    def test_noiseless_cube(self, nl2):
        prod = product_channel(nl2, 3)
        assert len(prod.inputs) == 8
        for i in range(8):
            for j in range(8):
                assert prod.rows[i][j] == (1 if i == j else 0)

    def test_bsc_square_entry(self, bsc14):
        prod = product_channel(bsc14, 2)
        xi = prod.inputs.index((0, 0))
        yi = prod.outputs.index((1, 1))
        assert prod.rows[xi][yi] == F(1, 4) * F(1, 4)
        yi = prod.outputs.index((0, 1))
        assert prod.rows[xi][yi] == F(3, 4) * F(1, 4)

    def test_cap_enforced(self, pentagon):
        with pytest.raises(ResourceCapError):
            product_channel(pentagon, 7)

    def test_stream_rejected(self, hover_channel):
        with pytest.raises(Exception):
            product_channel(hover_channel, 2)


weights = st.lists(st.integers(min_value=0, max_value=6), min_size=2, max_size=3)


@st.composite
def small_exact_channel(draw):
    nx = draw(st.integers(min_value=1, max_value=3))
    ny = draw(st.integers(min_value=2, max_value=3))
    rows = []
    for _ in range(nx):
        raw = draw(st.lists(st.integers(min_value=0, max_value=5),
                            min_size=ny, max_size=ny).filter(lambda r: sum(r) > 0))
        total = sum(raw)
        rows.append([F(v, total) for v in raw])
    return exact_channel(tuple(range(nx)), tuple(range(ny)), rows)


@given(ch=small_exact_channel(), n=st.integers(min_value=1, max_value=3))
@settings(max_examples=60, deadline=None)
def test_product_rows_sum_to_one(ch, n):
    prod = product_channel(ch, n)
    for row in prod.rows:
        assert sum(row) == 1


def test_typewriter_shape():
    ch = typewriter(5)
    for x in range(5):
        hits = [y for y in range(5) if ch.rows[x][y] > 0]
        assert hits == sorted({x, (x + 1) % 5})
        assert all(ch.rows[x][y] == F(1, 2) for y in hits)


def test_noiseless_support_is_diagonal():
    cert = certify_support(noiseless(3))
    assert cert.positive == frozenset((i, i) for i in range(3))
