import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grasstrans.grassgeo import (
    StiefelFrame,
    cos_angle,
    haar_frame,
    haar_frames,
    knapp_stein_kernel_check,
    make_rng,
    mc_grid,
    mc_symbol,
    mc_symbols,
    principal_angles,
    quat_embed,
    sin_angle,
    standard_frame,
)

FIELDS = ["R", "C", "H"]


def rotated_frame(field, n, t):
    """Frame of span(cos t_j e_j + sin t_j e_{r+j}); principal angles to xi_0 are t."""
    r = len(t)
    x = np.zeros((n, r))
    for j, tj in enumerate(t):
        x[j, j] = np.cos(tj)
        x[r + j, j] = np.sin(tj)
    if field == "R":
        return StiefelFrame("R", n, r, x)
    if field == "C":
        return StiefelFrame("C", n, r, x.astype(complex))
    return StiefelFrame("H", n, r, quat_embed(x.astype(complex), np.zeros((n, r), dtype=complex)))


def _first_entry_sq(field, n, frames):
    if field == "H":
        return np.abs(frames[:, 0, 0]) ** 2 + np.abs(frames[:, n, 0]) ** 2
    return np.abs(frames[:, 0, 0]) ** 2


@pytest.mark.parametrize("field", FIELDS)
def test_haar_first_coordinate_moment(field):
    n, r = 5, 2
    frames = haar_frames(field, n, r, 40000, make_rng(1))
    x = _first_entry_sq(field, n, frames)
    se = x.std() / np.sqrt(len(x))
    assert abs(x.mean() - 1 / n) < 5 * se


@pytest.mark.parametrize("field", FIELDS)
def test_frames_are_orthonormal(field):
    f = haar_frame(field, 6, 3, 7)
    assert f.orthonormality_error() < 1e-12
    c = f.complement()
    assert c.orthonormality_error() < 1e-12
    assert np.abs(f.data.conj().T @ c.data).max() < 1e-12


def test_rng_determinism():
    a = haar_frames("C", 5, 2, 10, make_rng(3, 1))
    b = haar_frames("C", 5, 2, 10, make_rng(3, 1))
    c = haar_frames("C", 5, 2, 10, make_rng(3, 2))
    assert np.array_equal(a, b) and not np.array_equal(a, c)


@pytest.mark.parametrize("field", FIELDS)
@given(t=st.lists(st.floats(0.01, 1.55), min_size=2, max_size=2))
def test_block_rotation_recovers_angles(field, t):
    y = rotated_frame(field, 5, t)
    x0 = standard_frame(field, 5, 2)
    assert np.allclose(np.sort(principal_angles(x0, y)), np.sort(t), atol=1e-7)
    assert cos_angle(x0, y) == pytest.approx(np.prod(np.cos(t)), abs=1e-12)
    assert sin_angle(x0, y) == pytest.approx(np.prod(np.sin(t)), abs=1e-12)


@pytest.mark.parametrize("field", FIELDS)
def test_cos_is_product_of_principal_cosines_and_symmetric(field):
    rng = make_rng(5)
    for _ in range(5):
        x = haar_frame(field, 6, 2, rng)
        y = haar_frame(field, 6, 2, rng)
        th = principal_angles(x, y)
        assert cos_angle(x, y) == pytest.approx(np.prod(np.cos(th)), rel=1e-9)
        assert cos_angle(x, y) == pytest.approx(cos_angle(y, x), rel=1e-9)


@pytest.mark.parametrize("field", FIELDS)
def test_cos_is_unitarily_invariant(field):
    rng = make_rng(6)
    x = haar_frame(field, 5, 2, rng)
    y = haar_frame(field, 5, 2, rng)
    g = haar_frame(field, 5, 5, rng).data
    gx = StiefelFrame(field, 5, 2, g @ x.data)
    gy = StiefelFrame(field, 5, 2, g @ y.data)
    assert cos_angle(gx, gy) == pytest.approx(cos_angle(x, y), rel=1e-9)


@pytest.mark.parametrize("field", FIELDS)
def test_rank_one_pythagoras(field):
    rng = make_rng(8)
    for _ in range(5):
        x = haar_frame(field, 4, 1, rng)
        y = haar_frame(field, 4, 1, rng)
        assert cos_angle(x, y) ** 2 + sin_angle(x, y) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_sin_examples():
    x0 = standard_frame("R", 4, 2)
    assert sin_angle(x0, x0) == pytest.approx(0.0, abs=1e-12)
    other = StiefelFrame("R", 4, 2, np.eye(4)[:, 2:])
    assert sin_angle(x0, other) == pytest.approx(1.0)
    assert cos_angle(x0, other) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("field", FIELDS)
def test_mc_trivial_weight_is_exactly_one(field):
    res = mc_symbol(field, 4, 2, 1, "cos", (0, 0), 5000, 0)
    assert res.estimate == pytest.approx(1.0, abs=1e-12)


def test_mc_independent_of_thread_count(monkeypatch):
    cells = [(1, "cos", (2, 0)), (2, "sin", (2, 2))]
    monkeypatch.setenv("GRASSTRANS_THREADS", "1")
    one = mc_symbols("C", 4, 2, cells, 70000, 9)
    monkeypatch.setenv("GRASSTRANS_THREADS", "3")
    three = mc_symbols("C", 4, 2, cells, 70000, 9)
    assert [r.estimate for r in one] == [r.estimate for r in three]


def test_mc_grid_small_passes():
    rep = mc_grid("R", 4, 2, [1], 4, 200_000, 2)
    assert rep["passed"] and len(rep["cells"]) == 2 * 4


def test_literal_multiplicities_are_rejected_by_sampling():
    # rank-one real case: 2b = n - 2 is what the sampled Haar measure sees
    geometric = mc_grid("R", 5, 1, [1], 2, 200_000, 4)
    literal = mc_grid("R", 5, 1, [1], 2, 200_000, 4, convention="literal")
    assert geometric["passed"]
    assert literal["max_abs_z"] > 20


@pytest.mark.parametrize("field", FIELDS)
@pytest.mark.parametrize("r", [1, 2])
def test_knapp_stein_kernel_identities(field, r):
    errs = knapp_stein_kernel_check(field, r, 0.3, 200, 1)
    assert max(errs.values()) < 1e-9


def test_kernel_identity_at_identity_matrix():
    # Y = I: span[I; I] has all principal angles pi/4, so |Sin|^a = 2^{-ar/2}
    for field, a in (("R", 1), ("C", 2)):
        r = 2
        y = np.eye(r)
        basis = np.vstack([np.eye(r), y]) / np.sqrt(2)
        frame = StiefelFrame(field, 2 * r, r, basis.astype(float if field == "R" else complex))
        assert sin_angle(standard_frame(field, 2 * r, r), frame) ** a == pytest.approx(2.0 ** (-a * r / 2))


def test_frame_shape_validation():
    with pytest.raises(ValueError):
        StiefelFrame("H", 4, 2, np.zeros((4, 2)))
    with pytest.raises(ValueError):
        haar_frame("R", 2, 3, 0)
