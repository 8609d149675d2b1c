"""Sector lengths, separability bounds and white-noise thresholds of qudit graph states."""

from .bounds import SeparabilityBound, bound, enumerate_partitions
from .graphs import AdjacencyMatrix, from_edges, make_family, parse_graph, read_graph
from .pauli import PauliOp, StabilizerGroupSpec, compose, commutation_phase, verify_stabilizer_group
from .sectors import SectorDistribution, sector_brute, sector_from_group
from .thresholds import NoiseModel, ThresholdReport, damp_sector, sector_threshold, threshold_table

__version__ = "0.1.0"
