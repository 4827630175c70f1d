import numpy as np
import pytest

from hadamard_bc import entropic as en
from hadamard_bc import oracle as orc
from hadamard_bc import region as rg
from hadamard_bc.channel import HadamardChannelSpec
from hadamard_bc.errors import NotClassical, SizeLimit

S2 = np.sqrt(0.5)


def h2(p):
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def test_embedding_detection(basis_identical, basis_orthonormal, basis_plus):
    assert orc.is_classical_embedded(basis_identical)
    assert orc.is_classical_embedded(basis_orthonormal)
    assert not orc.is_classical_embedded(basis_plus)
    hadamard_povm = HadamardChannelSpec([[S2, S2], [S2, -S2]], [[0, 1j], [1, 0]])
    assert orc.is_classical_embedded(hadamard_povm)
    overcomplete = HadamardChannelSpec([[S2, 0], [0, S2], [S2, 0], [0, S2]], [[1, 0], [0, 1], [1, 0], [0, 1]])
    assert not orc.is_classical_embedded(overcomplete)


def test_not_classical_raises(basis_plus):
    with pytest.raises(NotClassical):
        orc.classical_oracle_frontier(basis_plus)
    with pytest.raises(NotClassical):
        orc.classical_channel(basis_plus)


def test_size_limit():
    spec = HadamardChannelSpec(np.eye(4), np.eye(4))
    with pytest.raises(SizeLimit):
        orc.classical_oracle_frontier(spec)


def test_simplex_grid():
    g = orc.simplex_grid(3, 4)
    assert g.shape == (15, 3)
    np.testing.assert_allclose(g.sum(axis=1), 1.0)
    assert len({tuple(r) for r in g}) == 15


def test_noiseless_line(basis_orthonormal):
    front = orc.classical_oracle_frontier(basis_orthonormal, resolution=20)
    pts = front.as_array()
    assert np.all(pts.sum(axis=1) <= 1 + 1e-12)
    assert (pts[0, 0], pts[0, 1]) == pytest.approx((1.0, 0.0), abs=1e-12)
    assert (pts[-1, 0], pts[-1, 1]) == pytest.approx((0.0, 1.0), abs=1e-12)
    # deterministic letters per w with p(w) = (1/4, 3/4) reach (1 - h(1/4), h(1/4))
    assert np.sum(np.abs(pts.sum(axis=1) - 1) < 1e-9) >= 10
    assert rg.upper_boundary(front)(h2(0.25)) == pytest.approx(1 - h2(0.25), abs=1e-9)


def test_constant_to_charlie(basis_identical):
    front = orc.classical_oracle_frontier(basis_identical)
    assert front.as_array() == pytest.approx(np.array([[1.0, 0.0]]), abs=1e-12)


def test_oracle_ensembles_reproduce_rates():
    spec = HadamardChannelSpec([[S2, S2], [S2, -S2]], [[0, 1j], [1, 0]])
    front = orc.classical_oracle_frontier(spec, resolution=12)
    assert len(front) > 3
    for p in front:
        r = en.cc_rates(spec, p.achieving_ensemble)
        assert (r.primary_rate, r.charlie_rate_c) == pytest.approx((p.rate_b, p.rate_c), abs=1e-12)


def test_partially_merged_ternary_channel_matches_shannon_formula():
    # Charlie sees whether x == 2; Bob sees x exactly
    spec = HadamardChannelSpec(np.eye(3), [[1, 0], [1, 0], [0, 1]])
    front = orc.classical_oracle_frontier(spec, resolution=6, num_w=2)
    pts = front.as_array()
    assert pts[0] == pytest.approx([np.log2(3), 0.0], abs=1e-12)
    assert pts[:, 1].max() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.slow
def test_ternary_optimizer_agrees_with_oracle():
    spec = HadamardChannelSpec(np.eye(3), [[1, 0], [1, 0], [0, 1]])
    reference = orc.classical_oracle_frontier(spec)
    config = rg.OptimizationConfig(num_w=3, num_z=3, lambda_grid=9, restarts=4)
    found = rg.optimize_frontier(spec, "cc", config)
    assert rg.coverage_shortfall(found, reference, 0.02) <= 0.02
    assert rg.coverage_shortfall(reference, found, 0.02) <= 0.02
