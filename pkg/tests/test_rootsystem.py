from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grasstrans.rootsystem import (
    act,
    check_weight,
    dominant_rep,
    even_dominant_weights,
    grassmannian_preset,
    is_generic,
    measure_density,
    positive_roots,
    rho,
    rho_from_roots,
    root_system,
    weyl_group,
    weyl_group_order,
    weyl_orbit,
)

mults = st.fractions(min_value=0, max_value=6, max_denominator=4)


@st.composite
def root_systems(draw, max_rank=4):
    r = draw(st.integers(1, max_rank))
    return root_system(r, draw(mults), draw(mults), draw(mults))


@given(root_systems())
def test_rho_matches_half_sum_of_positive_roots(rs):
    assert rho(rs) == rho_from_roots(rs)


def test_rho_examples():
    # rho_j = iota + b + a (r - j)
    assert rho(root_system(2, 2, 4, 1)) == (5, 3)
    assert rho(root_system(1, 0, 2, 0)) == (1,)
    assert rho(grassmannian_preset("C", 5, 2)) == (4, 2)


@pytest.mark.parametrize("cfg", [(1, 1, 1, 0), (2, 1, 0, 0), (3, 2, 1, 1), (2, 4, 0, 3)])
def test_weyl_group_order_and_closure(cfg):
    rs = root_system(*cfg)
    elems = list(weyl_group(rs))
    assert len(elems) == len(set(elems)) == weyl_group_order(rs)
    v = tuple(range(1, rs.rank + 1))
    images = {act(w, v) for w in elems}
    assert len(images) == len(elems)
    for w1 in elems[:6]:
        for w2 in elems[:6]:
            assert act(w1, act(w2, v)) in images


def test_type_d_uses_even_sign_changes():
    rs = root_system(3, 1, 0, 0)
    assert rs.kind == "D"
    assert weyl_group_order(rs) == 24
    assert all(signs.count(-1) % 2 == 0 for _, signs in weyl_group(rs))
    assert dominant_rep(rs, (1, -3, 1)) == (3, 1, -1)
    assert dominant_rep(rs, (1, -3, -1)) == (3, 1, 1)


def test_kinds():
    assert root_system(2, 1, 1, 1).kind == "BC"
    assert root_system(2, 1, 1, 0).kind == "B"
    assert root_system(2, 1, 0, 1).kind == "C"
    assert root_system(2, 1, 0, 0).kind == "D"


@given(root_systems(max_rank=3), st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.integers(0, 10**6))
def test_density_is_weyl_invariant_and_pi_periodic(rs, pt, pick):
    t = np.array(pt[: rs.rank])
    d = measure_density(rs, t)
    elems = list(weyl_group(rs))
    w = elems[pick % len(elems)]
    assert np.isclose(measure_density(rs, np.array(act(w, t))), d, rtol=1e-9, atol=1e-9)
    shift = np.zeros(rs.rank)
    shift[pick % rs.rank] = np.pi
    assert np.isclose(measure_density(rs, t + shift), d, rtol=1e-9, atol=1e-9)


def test_density_vanishes_on_walls():
    rs = root_system(2, 1, 1, 1)
    assert measure_density(rs, [0.7, 0.7]) == pytest.approx(0, abs=1e-15)
    assert measure_density(rs, [0.7, 0.0]) == 0
    assert measure_density(rs, [0.7, 0.3]) > 0


def test_grassmannian_presets():
    rs = grassmannian_preset("C", 5, 2)
    assert (rs.rank, rs.a, rs.mult_short, rs.iota) == (2, 2, 2, 1)
    assert grassmannian_preset("R", 4, 2).kind == "D"
    assert grassmannian_preset("H", 4, 2).kind == "C"
    assert grassmannian_preset("R", 5, 1).as_tuple() == (1, 1, 3, 0)
    # the literal alternative doubles the short-root multiplicity
    assert grassmannian_preset("C", 5, 2, convention="literal").mult_short == 4


def test_preset_rejects_large_r():
    with pytest.raises(ValueError, match="2r <= n"):
        grassmannian_preset("R", 3, 2)
    with pytest.raises(ValueError):
        grassmannian_preset("O", 4, 1)


def test_check_weight_lattice():
    assert check_weight(root_system(2, 1, 1, 1), (4, 2)) == (4, 2)
    with pytest.raises(ValueError):
        check_weight(root_system(2, 1, 1, 1), (3, 1))
    assert check_weight(root_system(2, 1, 1, 0), (3, 1)) == (3, 1)
    with pytest.raises(ValueError):
        check_weight(root_system(2, 1, 1, 0), (2, 1))
    with pytest.raises(ValueError):
        check_weight(root_system(2, 1, 1, 0), (3, 1), even=True)
    assert check_weight(root_system(3, 1, 1, 1), (2,)) == (2, 0, 0)


def test_even_dominant_weights():
    ws = even_dominant_weights(2, 4)
    assert ws == [(0, 0), (2, 0), (2, 2), (4, 0)]
    assert all(sum(m) <= 12 for m in even_dominant_weights(3, 12))
    assert len(even_dominant_weights(1, 12)) == 7


def test_orbit_sizes():
    rs = root_system(2, 1, 1, 1)
    assert len(weyl_orbit(rs, (2, 0))) == 4
    assert len(weyl_orbit(rs, (4, 2))) == 8
    assert len(weyl_orbit(rs, (2, 2))) == 4


def test_is_generic():
    assert is_generic([1.0, 0.4])
    assert not is_generic([np.pi / 2, 0.4])
    assert not is_generic([0.4, 0.4])
    assert not is_generic([0.4, np.pi - 0.4])


def test_positive_roots_count():
    rs = root_system(3, 1, 1, 1)
    assert len(positive_roots(rs)) == 6 + 3 + 3
    assert all(m > 0 for _, m in positive_roots(root_system(2, 1, 0, 0)))


def test_negative_multiplicity_rejected():
    with pytest.raises(ValueError):
        root_system(2, -1, 0, 0)
    assert root_system(2, 0.5, 0, 0).a == Fraction(1, 2)
