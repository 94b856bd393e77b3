"""Exact and two-phase approximate random walk with restart on directed graphs."""
from .analysis import (block_structure_stat, column_difference_profile,
                       column_difference_stat, random_counterpart, sample_seeds)
from .cpi import CpiParams, CpiResult, cpi_run, cpi_windows, exact_rwr, pagerank
from .graph import (DanglingPolicy, EdgeListParseError, Graph, NodeIdMap, dump_edge_list,
                    generate_block_graph, generate_random_graph, load_edge_list,
                    propagation_sweep, set_threads)
from .metrics import (ErrorReport, PartError, UndefinedCorrelationError, bound_report,
                      l1_error, recall_at_k, spearman)
from .persistence import ArtifactFormatError, load_artifact, save_artifact
from .tpa import (StaleArtifactError, StrangerArtifact, TpaParams, neighbor_scale_factor,
                  preprocess, query, query_na)

__version__ = "0.1.0"
