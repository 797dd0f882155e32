"""Uplink user association for scalable cell-free massive MIMO.

Users are matched one-to-one to position-based virtual clusters of APs with
the Hungarian method, and compared against full cell-free, user-centric and
large-scale-fading-decoding baselines under MRC.
"""

from .assignment import BACKEND, AssociationResult, brute_force_max, build_weight_matrix, hungarian_max
from .channel import (ChannelStats, assign_pilots, build_channel_stats, correlated_shadowing,
                      estimate_quality, fpc_powers, noise_power, pathloss_db)
from .clustering import (ClusterCatalog, ServingAssignment, backhaul_load, build_fcf_sets,
                         build_pbvc, build_uc_sets, derive_cpu_sets, make_assignment)
from .config import SCHEMES, SimConfig, load_config, parse_config_text
from .errors import (CellFreeError, ConfigurationError, ContractError, DimensionError,
                     InputError, NumericalError)
from .geometry import NetworkLayout, cell_centric_partition, drop_network, wrap_distance
from .harness import ExperimentResult, emit_results, run_experiment, run_scheme
from .sinr import (RateReport, lsfd_sinr, rate_from_sinr, sinr_closed_form, sinr_matrix,
                   sinr_per_user, uatf_oracle, weighted_sinr)

__version__ = "0.1.0"
