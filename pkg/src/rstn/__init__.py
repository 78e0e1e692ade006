"""Entanglement statistics of random spin tensor networks.

Purity / Renyi-2 averages of random tensor-network states built on
4-valent edge-colored graphs with SU(2) spin labels, reduced to a
constrained two-level ("Ising") model over vertex configurations.
"""

from rstn.spins import dim_rep, channel_spins, intertwiner_dimension
from rstn.graph import BoundaryLink, ColoredGraph, Link
from rstn.state import Scenario, Sector, load_scenario, scenario_from_dict
from rstn.ising import IsingEngine, purity_gradient
from rstn.holography import analyze_holography, solve_weights

__all__ = [
    "dim_rep",
    "channel_spins",
    "intertwiner_dimension",
    "BoundaryLink",
    "ColoredGraph",
    "Link",
    "Scenario",
    "Sector",
    "load_scenario",
    "scenario_from_dict",
    "IsingEngine",
    "purity_gradient",
    "analyze_holography",
    "solve_weights",
]
