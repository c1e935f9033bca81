"""Multiway clustering of 3-way tensor block data under heteroskedastic noise.

The package provides the full toolchain: tensor algebra with fixed
unfolding conventions, heteroskedasticity-robust subspace estimation,
approximate k-means pipelines, an alternating block-mean refinement stage,
block-model simulators, clustering metrics, and a reproducible Monte-Carlo
experiment harness with a CLI.
"""

from ._backend import active_backend, set_backend
from .clustering import (ClusterAssignment, ClusterResult, KMeansConfig,
                         approx_kmeans, hhc, hlloyd, hsc)
from .experiment import (ExperimentConfig, ExperimentRecord, config_from_dict,
                         run_experiment, summarize, write_csv)
from .metrics import (adjusted_rand_index, balance_beta, cer, mcr,
                      separation_delta, snr)
from .model import (BlockModel, NoiseSpec, assemble_signal,
                    generate_stochastic_tbm, generate_subgaussian_tbm,
                    membership_matrix)
from .spectral import (DeflationTrace, SpectralConfig, SubspaceEstimate,
                       estimate_noise_scale, hetero_pca, rank_selection,
                       select_threshold, thresholded_deflated_hetero_pca,
                       vanilla_svd_subspace)
from .tensor3 import (Tensor3, dematricize, frobenius_norm, kron, matricize,
                      mode_product)

__version__ = "0.1.0"

__all__ = [
    "Tensor3", "matricize", "dematricize", "kron", "mode_product",
    "frobenius_norm",
    "SpectralConfig", "DeflationTrace", "SubspaceEstimate", "hetero_pca",
    "rank_selection", "thresholded_deflated_hetero_pca", "estimate_noise_scale",
    "select_threshold", "vanilla_svd_subspace",
    "ClusterAssignment", "ClusterResult", "KMeansConfig", "approx_kmeans",
    "hhc", "hsc", "hlloyd",
    "BlockModel", "NoiseSpec", "membership_matrix", "assemble_signal",
    "generate_subgaussian_tbm", "generate_stochastic_tbm",
    "mcr", "adjusted_rand_index", "cer", "separation_delta", "snr",
    "balance_beta",
    "ExperimentConfig", "ExperimentRecord", "config_from_dict",
    "run_experiment", "summarize", "write_csv",
    "active_backend", "set_backend",
]
