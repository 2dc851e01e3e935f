import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hvc.cgh import CghParams, burch_encode, encode_share, quantize_hologram, share_to_object_field
from hvc.numerics import zero_pad_center


def test_params_defaults_and_validation():
    p = CghParams()
    assert (p.pad_factor, p.carrier_cycles, p.carrier_axis, p.diffuser) == (4, 0.25, "horizontal", "off")
    for bad in (
        dict(pad_factor=1),
        dict(carrier_cycles=0.0),
        dict(carrier_cycles=0.5),
        dict(carrier_axis="diagonal"),
        dict(diffuser="ground-glass"),
    ):
        with pytest.raises(ValueError):
            CghParams(**bad)


def test_order_separation_check():
    CghParams().check_order_separation((64, 64))
    with pytest.raises(ValueError):
        CghParams(carrier_cycles=0.1).check_order_separation((64, 64))  # 25.6 <= 32
    with pytest.raises(ValueError):
        CghParams(pad_factor=2, carrier_cycles=0.3).check_order_separation((64, 64))
    with pytest.raises(ValueError):
        CghParams(pad_factor=2, carrier_cycles=0.25).check_order_separation((64, 64))
    CghParams(pad_factor=3, carrier_cycles=0.25).check_order_separation((64, 64))


def test_object_field_polarity_and_padding():
    share = np.array([[1, 0], [0, 0]], np.uint8)
    field = share_to_object_field(share, CghParams())
    assert field.shape == (8, 8)
    assert np.isrealobj(field)
    assert set(np.unique(field)) == {0.0, 1.0}
    assert np.array_equal(field[3:5, 3:5], 1 - share)
    assert not share_to_object_field(np.ones((3, 3), np.uint8)).any()


def test_object_field_diffuser(rng):
    share = rng.integers(0, 2, (8, 8)).astype(np.uint8)
    plain = share_to_object_field(share)
    p = CghParams(diffuser="random_phase", diffuser_seed=5)
    a, b = share_to_object_field(share, p), share_to_object_field(share, p)
    assert np.allclose(np.abs(a), plain, atol=1e-15)
    assert np.array_equal(a, b)
    other = share_to_object_field(share, CghParams(diffuser="random_phase", diffuser_seed=6))
    assert not np.array_equal(a, other)


def test_zero_object_gives_bias_only():
    h = burch_encode(np.zeros((32, 32)), CghParams())
    assert np.all(h.values == 0.5)
    assert h.spectrum_max == 0.0
    assert (h.share_width, h.share_height) == (8, 8)


def test_all_black_share_is_bias_only():
    h = encode_share(np.ones((8, 8), np.uint8))
    assert np.all(h.values == 0.5)


@pytest.mark.parametrize("axis", ["horizontal", "vertical"])
def test_centered_delta_gives_pure_carrier(axis):
    n = 64
    obj = np.zeros((n, n))
    obj[n // 2, n // 2] = 1.0
    p = CghParams(carrier_axis=axis)
    h = burch_encode(obj, p)
    t = np.arange(n) - n // 2
    fringe = 0.5 * (1 + np.cos(2 * np.pi * 0.25 * t))
    expected = np.tile(fringe, (n, 1)) if axis == "horizontal" else np.tile(fringe[:, None], (1, n))
    assert np.max(np.abs(h.values - expected)) < 1e-12
    # period 1/c = 4 samples
    line = h.values[0] if axis == "horizontal" else h.values[:, 0]
    assert np.allclose(line[:4], line[4:8])


def test_encode_dimension_mismatch():
    with pytest.raises(ValueError):
        burch_encode(np.zeros((30, 32)), CghParams())
    with pytest.raises(ValueError):
        burch_encode(np.zeros((32, 32)), CghParams(), share_shape=(4, 4))


def test_hologram_rejects_bad_values():
    from hvc.cgh import Hologram

    with pytest.raises(ValueError):
        Hologram(np.full((8, 8), 1.5), CghParams(), 2, 2, 1.0)
    with pytest.raises(ValueError):
        Hologram(np.zeros((8, 8), complex), CghParams(), 2, 2, 1.0)


def test_encode_deterministic(rng):
    share = rng.integers(0, 2, (16, 16)).astype(np.uint8)
    a, b = encode_share(share), encode_share(share)
    assert a == b
    assert a.values.tobytes() == b.values.tobytes()


def test_quantize():
    h = burch_encode(np.zeros((16, 16)), CghParams())
    q = quantize_hologram(h, 8)
    assert np.all(q.values == 128 / 255)
    assert q.values[0, 0] == pytest.approx(0.50196, abs=1e-5)
    assert quantize_hologram(q, 8) == q
    with pytest.raises(ValueError):
        quantize_hologram(h, 12)


def test_quantize_idempotent(rng):
    h = encode_share(rng.integers(0, 2, (16, 16)).astype(np.uint8))
    for bits in (8, 16):
        once = quantize_hologram(h, bits)
        assert quantize_hologram(once, bits) == once
        assert np.max(np.abs(once.values - h.values)) <= 0.5 / (2**bits - 1) + 1e-15


@settings(max_examples=25, deadline=None)
@given(
    size=st.sampled_from([4, 6, 8, 12, 16]),
    seed=st.integers(0, 2**32),
    axis=st.sampled_from(["horizontal", "vertical"]),
    diffuser=st.sampled_from(["off", "random_phase"]),
)
def test_property_range_realness_and_bias(size, seed, axis, diffuser):
    share = np.random.default_rng(seed).integers(0, 2, (size, size)).astype(np.uint8)
    p = CghParams(carrier_axis=axis, diffuser=diffuser, diffuser_seed=seed)
    h = encode_share(share, p)
    assert h.values.dtype == np.float64
    assert h.values.min() >= 0.0 and h.values.max() <= 1.0
    assert abs(h.values.mean() - 0.5) <= 2.0 / h.values.shape[p.axis]


def test_object_grid_centre_alignment():
    share = np.zeros((6, 6), np.uint8)
    share[3, 3] = 1
    field = share_to_object_field(share)
    expected = zero_pad_center((1 - share).astype(float), 24, 24)
    assert np.array_equal(field, expected)
    assert field[12, 12] == 0.0
