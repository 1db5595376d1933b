"""Graph-constrained compressed sensing: measurement matrices whose rows
must induce connected subgraphs, sparse recovery by l1/l0 decoding, and
desk-scale identifiability verification."""

__version__ = "0.1.0"

from .graphs import (Graph, EdgeAnnotations, HubCertificate, Partition,
                     BfsTree, is_connected_induced, is_hub, validate_partition,
                     bfs_tree, radius_and_center, reduce_node, line_graph,
                     components)
from .matrices import (MeasurementMatrix, DecodePlan, DecodeGroup,
                       apply_matrix, check_feasibility, hub_compose,
                       whole_vector_plan)
from .kernels import (CompleteKernelSpec, complete_kernel, kernel_row_count,
                      default_kernel_spec, BINARY_EXPANSION, BERNOULLI_HALF,
                      BERNOULLI_ONES_ROW)
from .constructors import (LineSpec, ShortSpec, BK, DK, path_graph, ring_graph,
                           g4_graph, g4h_graph, ring_network_line_graph,
                           grid_graph, line_matrix, line_min_measurements,
                           g4_matrix, g4h_matrix, ring_network_line_graph_matrix,
                           grid_matrix, tree_matrix, markov_rows, short_matrix,
                           g4_bounded_length_matrix)
from .general import (GeneralPlan, algorithm1, algorithm1_trace,
                      algorithm1_with_agents, leaf_group_trace,
                      custom_leaf_construction)
from .recovery import (SparseVector, RecoveryResult, l1_minimize, l0_oracle,
                       sequential_decode, hub_error_matrix, hub_error_recover,
                       augmented_l1_recover)
from .verify import (columns_2k_independent, exhaustive_identifiability,
                     nsp_verify, integer_rank, rational_null_basis)
from .randgraphs import (ErdosRenyiSpec, BarabasiAlbertSpec, gen_er, gen_ba,
                         er_partition_split, er_pipeline,
                         giant_component_alpha, expected_component_count)
from .experiments import (ExperimentRecord, experiment1, experiment2,
                          er_partition_experiment)
