import math

import numpy as np
import pytest

from cohom1 import oracles, profiles
from cohom1.profiles import eval_profile, profile


def test_s4_commutator_points():
    assert oracles.s4_action_norms(0.0)[0] == pytest.approx(0.0, abs=1e-15)
    assert oracles.s4_action_norms(math.pi / 2)[0] == pytest.approx(4.0, abs=1e-14)
    assert oracles.s4_action_norms(math.pi / 6) == pytest.approx((1, 1, 4), abs=1e-14)


def test_sym_traceless_basis_orthonormal():
    e = oracles.sym_traceless_basis()
    gram = np.array([[np.trace(a @ b) for b in e] for a in e])
    assert np.allclose(gram, np.eye(5), atol=1e-15)
    assert all(abs(np.trace(a)) < 1e-15 and np.allclose(a, a.T) for a in e)


def test_s4_matches_closed_form_beyond_L():
    # the oracle is defined for every t, and the closed form is analytic
    for t in np.linspace(0, math.pi, 37):
        assert oracles.s4_action_norms(t)[0] == pytest.approx(4 * math.sin(t) ** 2, abs=1e-13)


def test_b7_points():
    assert oracles.b7_action_norms(0.0) == pytest.approx((0.2, 1.8, 0.6), abs=1e-15)
    assert oracles.b7_action_norms(math.pi / 2)[2] == pytest.approx(-0.2, abs=1e-15)
    for t in np.linspace(0, 2 * math.pi, 41):
        f, g, _ = oracles.b7_action_norms(t)
        assert f + g == pytest.approx(2 * (5 + 4 * math.sin(t) ** 2) / 5, abs=1e-13)


def test_b7_h_spans_isotropy():
    # the three H generators are Q-orthogonal with equal norms
    Q = np.array([[-0.5 * np.trace(a @ b) for b in oracles.B7_H] for a in oracles.B7_H])
    assert np.allclose(Q, Q[0, 0] * np.eye(3), atol=1e-14)


def test_b7_all_indices_match():
    prof = profile("B7")
    for t in np.linspace(0, prof.L, 31):
        blk, cross = oracles.b7_blocks(t)
        ref = eval_profile(prof, t)
        assert np.allclose(blk.f, ref.f, atol=1e-13)
        assert np.allclose(blk.g, ref.g, atol=1e-13)
        assert np.allclose(blk.h, ref.h, atol=1e-13)
        assert cross < 1e-13


def test_b7_index_map_is_an_involution():
    m = oracles.B7_INDEX_MAP
    assert tuple(m[m[a]] for a in range(3)) == (0, 1, 2)


@pytest.mark.parametrize("p", [1, 2, 10])
@pytest.mark.parametrize("eps", [0.5, 0.9])
def test_eschenburg_oracle(p, eps):
    prof = profile("E_p", p=p, eps=eps)
    for t in np.linspace(0, prof.L, 13):
        r = oracles.eschenburg_oracle(p, eps, t)
        ref = eval_profile(prof, t)
        assert np.allclose(r.blocks.f, ref.f, atol=1e-10)
        assert np.allclose(r.blocks.g, ref.g, atol=1e-10)
        assert np.allclose(r.blocks.h, ref.h, atol=1e-10)
        assert r.v_norm2 == pytest.approx(oracles.vertical_norm_formula(p, eps, t), abs=1e-12)
        assert r.horizontality < 1e-12
        assert r.cross_max < 1e-12


def test_eschenburg_points():
    eps = 0.5
    r = oracles.eschenburg_oracle(1, eps, 0.0)
    assert r.v_norm2 == pytest.approx(3 * eps, abs=1e-14)
    assert r.blocks.f[0] == pytest.approx(eps, abs=1e-14)
    for t in (0.1, 0.7, 1.3):
        assert oracles.eschenburg_oracle(4, eps, t).blocks.g[1] == pytest.approx(eps, abs=1e-13)


def test_eschenburg_rejects_bad_input():
    with pytest.raises(oracles.OracleError):
        oracles.eschenburg_oracle(0, 0.5, 0.1)
    with pytest.raises(oracles.OracleError):
        oracles.eschenburg_oracle(2, -1.0, 0.1)


def test_plane_rotation_is_orthogonal():
    r = oracles.plane_rotation(5, 1, 2, 0.3)
    assert np.allclose(r @ r.T, np.eye(5), atol=1e-15)
    assert np.linalg.det(r) == pytest.approx(1.0)
