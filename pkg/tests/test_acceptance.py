"""Acceptance suite: one test per release criterion, each printing a
[PASS]/[FAIL] line (run with ``pytest tests/test_acceptance.py -v -s``).

Criteria 1-4 are Monte-Carlo checks of the clustering pipelines at fixed
scales, seeds, and thresholds; 5-6 pin the algorithmic primitives against
independent oracles; 7 pins byte-level reproducibility of the experiment
harness.
"""

import itertools
import time

import numpy as np
import pytest
from scipy.stats import binomtest

from heteroclust.clustering import (ClusterAssignment, KMeansConfig,
                                    approx_kmeans, hlloyd)
from heteroclust.experiment import ExperimentConfig, run_experiment, write_csv
from heteroclust.linalg import p_offdiag, sym_eig_top
from heteroclust.metrics import mcr
from heteroclust.model import generate_subgaussian_tbm
from heteroclust.rng import Stream
from heteroclust.spectral import hetero_pca, rank_selection
from heteroclust.tensor3 import Tensor3, dematricize, kron, matricize, mode_product
from oracles import (brute_force_kmeans, mcr_enumerate,
                     rank_selection_enumerate)


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile jitted kernels once so criterion timings measure the algorithms
    y, truth = generate_subgaussian_tbm(12, 2, 0.5, seed=1, balanced=True)
    from heteroclust.clustering import hhc
    res = hhc(y, (2, 2, 2), None, KMeansConfig(seed=1))
    hlloyd(y, res.assignments, 1)


def report(criterion, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def test_criterion_1_exact_recovery_high_snr():
    start = time.perf_counter()
    cfg = ExperimentConfig(model="subgaussian", n=60, k=3,
                           sweep_param="delta", sweep_values=(0.4,),
                           trials=100, methods=("hhc",), base_seed=101,
                           balanced=True)
    records = run_experiment(cfg)
    exact = sum(r.exact for r in records)
    elapsed = time.perf_counter() - start
    ok = exact >= 95 and elapsed <= 60.0
    report("criterion 1 (exact recovery at high SNR)", ok,
           f"exact {exact}/100 trials (need >= 95), {elapsed:.1f}s (budget 60s)")


def test_criterion_2_heteroskedastic_advantage():
    start = time.perf_counter()
    cfg = ExperimentConfig(model="subgaussian", n=60, k=3,
                           sweep_param="delta", sweep_values=(0.9,),
                           trials=100,
                           methods=("hhc", "hsc", "hhc-hlloyd", "hsc-hlloyd"),
                           base_seed=202, balanced=True)
    records = run_experiment(cfg)
    per_trial = {}
    for r in records:
        per_trial.setdefault(r.trial, {})[r.method] = r
    cers = {m: np.mean([per_trial[t][m].cer_mean for t in per_trial])
            for m in ("hhc", "hsc")}
    wins = sum(per_trial[t]["hhc"].cer_mean < per_trial[t]["hsc"].cer_mean
               for t in per_trial)
    losses = sum(per_trial[t]["hhc"].cer_mean > per_trial[t]["hsc"].cer_mean
                 for t in per_trial)
    pvalue = binomtest(wins, wins + losses, 0.5,
                       alternative="greater").pvalue if wins + losses else 1.0
    rec = {m: np.mean([per_trial[t][m].exact for t in per_trial])
           for m in ("hhc-hlloyd", "hsc-hlloyd")}
    elapsed = time.perf_counter() - start
    ok = (cers["hhc"] < cers["hsc"] and pvalue < 0.05
          and rec["hhc-hlloyd"] >= rec["hsc-hlloyd"] and elapsed <= 300.0)
    report("criterion 2 (heteroskedastic advantage)", ok,
           f"mean CER {cers['hhc']:.4f} vs {cers['hsc']:.4f}, "
           f"sign test p={pvalue:.2e} ({wins}W/{losses}L), recovery "
           f"{rec['hhc-hlloyd']:.2f} vs {rec['hsc-hlloyd']:.2f}, "
           f"{elapsed:.1f}s (budget 300s)")


def test_criterion_3_stochastic_sweep():
    start = time.perf_counter()
    grid = (0.8, 1.5, 2.5, 4.0, 6.0)
    cfg = ExperimentConfig(model="stochastic", n=80, k=3,
                           sweep_param="a", sweep_values=grid, trials=100,
                           methods=("hhc", "hhc-hlloyd"), base_seed=303,
                           balanced=True)
    records = run_experiment(cfg)
    means = {m: [] for m in ("hhc", "hhc-hlloyd")}
    recovery_last = np.mean([r.exact for r in records
                             if r.method == "hhc-hlloyd" and r.value == grid[-1]])
    for method in means:
        for value in grid:
            means[method].append(np.mean(
                [r.cer_mean for r in records
                 if r.method == method and r.value == value]))
    def monotone_ok(seq):
        violations = [max(0.0, seq[i + 1] - seq[i]) for i in range(len(seq) - 1)]
        bad = [v for v in violations if v > 1e-12]
        return len(bad) <= 1 and all(v <= 0.02 for v in bad)
    elapsed = time.perf_counter() - start
    ok = (monotone_ok(means["hhc"]) and monotone_ok(means["hhc-hlloyd"])
          and recovery_last >= 0.9 and elapsed <= 300.0)
    report("criterion 3 (stochastic model sweep)", ok,
           f"CER(hhc)={[f'{v:.3f}' for v in means['hhc']]}, "
           f"CER(+refine)={[f'{v:.3f}' for v in means['hhc-hlloyd']]}, "
           f"recovery at a={grid[-1]}: {recovery_last:.2f} (need >= 0.9), "
           f"{elapsed:.1f}s (budget 300s)")


def test_criterion_4_refinement_non_degradation():
    start = time.perf_counter()
    kept = 0
    for trial in range(100):
        y, truth = generate_subgaussian_tbm(60, 3, 0.4, seed=40_000 + trial,
                                            balanced=True)
        refined, _ = hlloyd(y, truth.assignments, 10)
        kept += all(mcr(truth.assignments[i], refined[i]) == 0.0
                    for i in range(3))
    elapsed = time.perf_counter() - start
    ok = kept >= 95
    report("criterion 4 (refinement keeps exact start)", ok,
           f"exact kept in {kept}/100 trials (need >= 95), {elapsed:.1f}s")


def test_criterion_5a_imputation_fixed_point():
    ones = np.ones((4, 4))
    g_out, u = hetero_pca(ones, 1, 30)
    fixed = np.abs(g_out - ones).max() <= 1e-12
    rng = np.random.default_rng(0)
    preserved = True
    for _ in range(25):
        a = rng.standard_normal((8, 8))
        g_in = (a + a.T) / 2.0
        g2, _ = hetero_pca(g_in, 3, 7)
        preserved &= np.array_equal(p_offdiag(g2), p_offdiag(g_in))
    report("criterion 5a (imputation fixed point, off-diagonal bit-exact)",
           fixed and preserved,
           f"fixed point {'held' if fixed else 'broke'}, off-diagonal "
           f"{'bit-exact' if preserved else 'mutated'}")


def test_criterion_5b_rank_selection_enumeration():
    rng = np.random.default_rng(1)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(2, 10))
        sig = np.sort(rng.uniform(0.0, 10.0, size=n))[::-1]
        if rng.uniform() < 0.25:
            sig[int(rng.integers(0, n)):] = 0.0
        r = int(rng.integers(1, n + 1))
        r_prev = int(rng.integers(0, r))
        got = rank_selection(np.diag(sig), r, r_prev)
        want = rank_selection_enumerate(sig, r, r_prev)
        mismatches += got != want
    report("criterion 5b (rank selection vs enumeration)", mismatches == 0,
           f"{1000 - mismatches}/1000 random spectra agree")


def test_criterion_5c_kmeans_brute_force():
    # hit rate is aggregated over the battery: single instances exist whose
    # local-optimum basins cap any 10-restart seeding near ~94% (greedy
    # variants measure the same), so the 99% bar is a battery-level rate
    rng = np.random.default_rng(2)
    hits = 0
    total = 0
    worst = 1.0
    for inst in range(10):
        n = int(rng.integers(3, 9))
        d = int(rng.integers(1, 3))
        x = rng.standard_normal((n, d))
        best = brute_force_kmeans(x, 2)
        inst_hits = 0
        for seed in range(100):
            _, _, obj = approx_kmeans(x, 2, KMeansConfig(seed=seed * 31 + inst))
            assert obj <= 2.0 * best + 1e-12  # approximation factor always
            inst_hits += obj <= best * (1.0 + 1e-9) + 1e-12
        hits += inst_hits
        total += 100
        worst = min(worst, inst_hits / 100.0)
    rate = hits / total
    report("criterion 5c (k-means finds brute-force optimum)", rate >= 0.99,
           f"optimum found in {hits}/{total} runs (need >= 99%), "
           f"hardest instance {worst:.2f}")


def test_criterion_5d_mcr_hungarian_vs_enumeration():
    rng = np.random.default_rng(3)
    mismatches = 0
    for _ in range(1000):
        k = int(rng.integers(1, 7))
        n = int(rng.integers(k, 30))
        z = rng.integers(1, k + 1, size=n)
        zh = rng.integers(1, k + 1, size=n)
        got = mcr(ClusterAssignment(z, k), ClusterAssignment(zh, k))
        want = mcr_enumerate(z, zh, k)
        mismatches += abs(got - want) > 1e-12
    report("criterion 5d (assignment-based MCR vs permutation enumeration)",
           mismatches == 0, f"{1000 - mismatches}/1000 pairs agree")


def test_criterion_5e_eigensolver_quality():
    rng = np.random.default_rng(4)
    worst_recon = 0.0
    worst_orth = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 51))
        a = rng.standard_normal((n, n))
        g = (a + a.T) / 2.0
        out = sym_eig_top(g, n)
        u = out.eigenvectors
        recon = np.abs((u * out.eigenvalues) @ u.T - g).max() / (1.0 + np.abs(g).max())
        orth = np.abs(u.T @ u - np.eye(n)).max()
        worst_recon = max(worst_recon, recon)
        worst_orth = max(worst_orth, orth)
    ok = worst_recon <= 1e-8 and worst_orth <= 1e-10
    report("criterion 5e (eigensolver reconstruction/orthonormality)", ok,
           f"worst reconstruction {worst_recon:.2e} (<= 1e-8), "
           f"worst orthonormality {worst_orth:.2e} (<= 1e-10) over 1000 matrices")


def test_criterion_6_tensor_identities():
    rng = np.random.default_rng(5)
    roundtrip_ok = True
    identity_worst = 0.0
    for _ in range(100):
        dims = (int(rng.integers(1, 5)), int(rng.integers(1, 6)),
                int(rng.integers(1, 7)))
        t = Tensor3(rng.standard_normal(dims))
        for mode in (1, 2, 3):
            back = dematricize(matricize(t, mode), mode, dims)
            roundtrip_ok &= np.array_equal(back.data, t.data)
        ranks = (int(rng.integers(1, 4)), int(rng.integers(1, 4)),
                 int(rng.integers(1, 4)))
        g = Tensor3(rng.standard_normal(ranks))
        vs = [rng.standard_normal((dims[i], ranks[i])) for i in range(3)]
        prod = mode_product(mode_product(mode_product(g, vs[0], 1),
                                         vs[1], 2), vs[2], 3)
        for i in range(3):
            lhs = matricize(prod, i + 1)
            rhs = vs[i] @ matricize(g, i + 1) @ kron(vs[(i + 2) % 3],
                                                     vs[(i + 1) % 3]).T
            rel = np.abs(lhs - rhs).max() / max(1.0, np.abs(rhs).max())
            identity_worst = max(identity_worst, rel)
    ok = roundtrip_ok and identity_worst <= 1e-12
    report("criterion 6 (tensor algebra identities)", ok,
           f"round-trips {'bit-exact' if roundtrip_ok else 'BROKEN'}, "
           f"factorization identity worst error {identity_worst:.2e} (<= 1e-12)")


def test_criterion_7_csv_reproducibility(tmp_path):
    from heteroclust.cli import main
    cfg = tmp_path / "exp.json"
    cfg.write_text('{"model": "subgaussian", "n": 24, "k": 2,'
                   ' "sweep": {"param": "delta", "values": [0.5, 1.1]},'
                   ' "trials": 3,'
                   ' "methods": ["hhc", "hsc", "hhc-hlloyd", "hsc-hlloyd"],'
                   ' "base_seed": 7, "balanced": true}')
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    assert main(["experiment", "--config", str(cfg), "--out", str(out1),
                 "--quiet"]) == 0
    assert main(["experiment", "--config", str(cfg), "--out", str(out2),
                 "--quiet"]) == 0
    identical = out1.read_bytes() == out2.read_bytes()
    report("criterion 7 (byte-identical experiment CSV)", identical,
           f"two runs produced {'identical' if identical else 'DIFFERENT'} bytes "
           f"({out1.stat().st_size} bytes each)")
