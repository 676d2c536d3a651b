"""Vaccination strategies for the firefighter model on trees and grids."""

from .census import count_rooted_trees, gap_census, level_sequences, rooted_trees
from .grid import TOPOLOGIES, get_topology
from .lp import build_ip, gap, solve_ip, solve_lp
from .protocol import OutbreakState, ProtocolOutcome, run
from .strategies import KpqParams, greedy, make_kpq, optimal_bruteforce, unburn
from .tree import RootedTree, build_tree, parse_tree

__all__ = [
    "KpqParams",
    "OutbreakState",
    "ProtocolOutcome",
    "RootedTree",
    "TOPOLOGIES",
    "build_ip",
    "build_tree",
    "count_rooted_trees",
    "gap",
    "gap_census",
    "get_topology",
    "greedy",
    "level_sequences",
    "make_kpq",
    "optimal_bruteforce",
    "parse_tree",
    "rooted_trees",
    "run",
    "solve_ip",
    "solve_lp",
    "unburn",
]

__version__ = "0.1.0"
