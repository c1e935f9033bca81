import numpy as np
import pytest

from heteroclust.clustering import ClusterAssignment
from heteroclust.metrics import separation_delta
from heteroclust.model import (BlockModel, NoiseSpec, assemble_signal,
                               generate_stochastic_tbm, generate_subgaussian_tbm,
                               membership_matrix, stochastic_core)
from heteroclust.tensor3 import Tensor3, mode_product


def test_membership_examples():
    assert np.array_equal(membership_matrix(ClusterAssignment([1, 2], 2)), np.eye(2))
    m = membership_matrix(ClusterAssignment([1, 1, 2], 2))
    assert np.array_equal(m, np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


def test_membership_gram_is_diagonal_with_sizes():
    rng = np.random.default_rng(0)
    for _ in range(10):
        k = int(rng.integers(1, 5))
        n = int(rng.integers(k, 20))
        labels = rng.integers(1, k + 1, size=n)
        m = membership_matrix(ClusterAssignment(labels, k))
        gram = m.T @ m
        sizes = np.bincount(labels - 1, minlength=k).astype(float)
        assert np.array_equal(gram, np.diag(sizes))
        assert np.array_equal(m.sum(axis=1), np.ones(n))


def test_assemble_signal_constant_and_identity():
    bm = BlockModel(Tensor3(np.full((1, 1, 1), 3.5)),
                    tuple(ClusterAssignment([1, 1], 1) for _ in range(3)),
                    NoiseSpec("none"))
    out = assemble_signal(bm, (2, 2, 2))
    assert np.array_equal(out.data, np.full((2, 2, 2), 3.5))

    rng = np.random.default_rng(1)
    core = Tensor3(rng.standard_normal((2, 2, 2)))
    bm2 = BlockModel(core,
                     tuple(ClusterAssignment([1, 2], 2) for _ in range(3)),
                     NoiseSpec("none"))
    assert np.array_equal(assemble_signal(bm2, (2, 2, 2)).data, core.data)


def test_assemble_signal_lookup_matches_multilinear():
    rng = np.random.default_rng(2)
    for _ in range(10):
        ks = tuple(int(v) for v in rng.integers(1, 4, size=3))
        ns = tuple(int(ks[i] + rng.integers(0, 5)) for i in range(3))
        core = Tensor3(rng.standard_normal(ks))
        assignments = tuple(
            ClusterAssignment(np.concatenate([
                np.arange(1, ks[i] + 1),
                rng.integers(1, ks[i] + 1, size=ns[i] - ks[i])]), ks[i])
            for i in range(3))
        bm = BlockModel(core, assignments, NoiseSpec("none"))
        lookup = assemble_signal(bm, ns)
        chain = core
        for i in range(3):
            chain = mode_product(chain, membership_matrix(assignments[i]), i + 1)
        assert np.array_equal(lookup.data, chain.data)


def test_assemble_signal_dim_error():
    bm = BlockModel(Tensor3(np.ones((1, 1, 1))),
                    tuple(ClusterAssignment([1, 1], 1) for _ in range(3)),
                    NoiseSpec("none"))
    with pytest.raises(ValueError):
        assemble_signal(bm, (2, 2, 3))


def test_subgaussian_separation_enforced():
    for delta in (0.4, 0.9):
        _, truth = generate_subgaussian_tbm(30, 3, delta, seed=5)
        target = 40.0 * 30.0 ** (-delta)
        assert separation_delta(truth.core)[3] == pytest.approx(target, rel=1e-10)


def test_subgaussian_reproducible_and_valid():
    y1, t1 = generate_subgaussian_tbm(20, 3, 0.7, seed=42)
    y2, t2 = generate_subgaussian_tbm(20, 3, 0.7, seed=42)
    assert y1.data.tobytes() == y2.data.tobytes()
    assert t1.core.data.tobytes() == t2.core.data.tobytes()
    for i in range(3):
        assert np.array_equal(t1.assignments[i].labels, t2.assignments[i].labels)
        assert np.unique(t1.assignments[i].labels).size == 3  # no empty clusters
        scale = t1.noise.mode_scales[i]
        assert scale.size == 20 and scale.min() >= 0.0 and scale.max() <= 2.0
    y3, _ = generate_subgaussian_tbm(20, 3, 0.7, seed=43)
    assert y3.data.tobytes() != y1.data.tobytes()


def test_subgaussian_balanced_flag():
    _, truth = generate_subgaussian_tbm(21, 3, 0.5, seed=6, balanced=True)
    for i in range(3):
        counts = np.bincount(truth.assignments[i].labels - 1, minlength=3)
        assert counts.tolist() == [7, 7, 7]


def test_stochastic_core_values():
    core = stochastic_core(100, 3, 1.0)
    assert core.data[0, 0, 0] == pytest.approx(0.01, rel=1e-12)
    assert core.data[1, 1, 1] == pytest.approx(0.0075, rel=1e-12)
    assert core.data[2, 2, 2] == pytest.approx(0.005, rel=1e-12)
    assert core.data[0, 1, 2] == pytest.approx(1e-4, rel=1e-12)


def test_stochastic_rejects_bad_scale():
    with pytest.raises(ValueError):
        stochastic_core(100, 3, 0.0)
    with pytest.raises(ValueError):
        stochastic_core(100, 3, -2.0)
    with pytest.raises(ValueError):
        stochastic_core(4, 3, 10.0)  # 10a n^-1.5 > 1


def test_stochastic_output_binary_and_reproducible():
    y1, t1 = generate_stochastic_tbm(15, 2, 3.0, seed=7)
    y2, _ = generate_stochastic_tbm(15, 2, 3.0, seed=7)
    assert y1.data.tobytes() == y2.data.tobytes()
    assert set(np.unique(y1.data)) <= {0.0, 1.0}
    assert t1.noise.kind == "bernoulli"


def test_stochastic_cell_moment():
    # mean of one observed cell minus its model probability, across reseeds
    reps = 10_000
    diffs = np.empty(reps)
    variances = np.empty(reps)
    for rep in range(reps):
        y, truth = generate_stochastic_tbm(6, 2, 1.0, seed=rep)
        z = [a.labels[0] - 1 for a in truth.assignments]
        p = truth.core.data[z[0], z[1], z[2]]
        diffs[rep] = y.data[0, 0, 0] - p
        variances[rep] = p * (1.0 - p)
    se = np.sqrt(variances.sum()) / reps
    assert abs(diffs.mean()) <= 3.0 * se


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec("gaussian")
    with pytest.raises(ValueError):
        NoiseSpec("heteroskedastic_gaussian")
    with pytest.raises(ValueError):
        NoiseSpec("heteroskedastic_gaussian",
                  (np.array([1.0]), np.array([-1.0]), np.array([1.0])))
    with pytest.raises(ValueError):
        BlockModel(Tensor3(np.full((1, 1, 1), 1.5)),
                   tuple(ClusterAssignment([1, 1], 1) for _ in range(3)),
                   NoiseSpec("bernoulli"))  # probability 1.5 invalid
