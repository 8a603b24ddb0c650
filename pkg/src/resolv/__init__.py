"""Community detection with principled resolution-parameter bounds.

The package answers three questions about a graph's community structure:

* which resolution parameters (if any) can recover a given pattern under
  generalized modularity, read off relative edge densities;
* whether a proposed split is statistically significant or just the noise
  floor of a degree sequence (Bayes posterior odds);
* what the communities are across scales, via recursive split-and-test
  detection that never needs a hand-picked resolution.
"""

from .errors import ParseError, ResolvError, ValidationError
from .graph import (Graph, Partition, induced_subgraph, load_communities,
                    load_edge_list, partition_stats, write_communities,
                    write_edge_list)
from .generators import (DcsbmParams, ExtendedPpmParams, make_clique,
                         make_plateau_fixture, sample_dcsbm, sample_er,
                         sample_extended_ppm)
from .metrics import ContingencyTable, ari, f_measure, nmi
from .model_selection import OddsReport, bayes_log_odds
from .modularity import delta_merge, louvain_maximize, modularity
from .multiscale import CommunityTree, TreeNode, multiscale_detect
from .resolution import (DensityMatrix, ExtendedPpmFit, PpmFit,
                         ResolutionInterval, estimate_density_matrix,
                         fit_extended_ppm, fit_ppm, mle_gamma,
                         resolution_interval, rescale_gamma)
from .seeding import derive_seed
from .datasets import karate_club

__version__ = "0.1.0"

__all__ = [
    "ResolvError", "ParseError", "ValidationError",
    "Graph", "Partition", "load_edge_list", "write_edge_list",
    "load_communities", "write_communities", "induced_subgraph", "partition_stats",
    "DcsbmParams", "ExtendedPpmParams", "sample_dcsbm", "sample_extended_ppm",
    "sample_er", "make_clique", "make_plateau_fixture",
    "modularity", "delta_merge", "louvain_maximize",
    "DensityMatrix", "ResolutionInterval", "PpmFit", "ExtendedPpmFit",
    "estimate_density_matrix", "resolution_interval", "fit_ppm",
    "fit_extended_ppm", "mle_gamma", "rescale_gamma",
    "OddsReport", "bayes_log_odds",
    "CommunityTree", "TreeNode", "multiscale_detect",
    "ContingencyTable", "nmi", "ari", "f_measure",
    "derive_seed", "karate_club",
]
