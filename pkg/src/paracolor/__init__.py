"""Multithreaded distance-1 graph coloring on CSR graphs.

Serial first-fit greedy, speculative iterative coloring, and recursive
dataflow coloring, plus an R-MAT generator and structural statistics.
"""

from .dataflow import (ClaimTable, ColorBoard, board_purge, claim, dataflow_color,
                       dataflow_run, process_vertex, publish_color, read_color_blocking)
from .errors import DeadlockSuspected, GraphFormatError, InputError, ProtocolError
from .graph import (ClusteringReport, DegreeStats, Graph, average_clustering, build_graph,
                    clustering_report, degree_stats, local_clustering, shuffle_labels)
from .greedy import first_permissible, greedy_color, new_marks, num_colors, verify_coloring
from .io import load_graph, read_csr, read_edge_list, save_graph, write_csr, write_edge_list
from .iterative import (RoundStats, SchedulePolicy, detect_conflicts, iterative_color,
                        tentative_round)
from .rmat import RmatParams, preset, rmat_generate, sample_edge

__version__ = "0.1.0"
