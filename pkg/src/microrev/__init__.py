"""Quantum microscopic reversibility for a qubit under generalized amplitude damping."""

from .channel import (
    ChannelParams,
    TimeMap,
    TransitionReport,
    backward_prob_closed,
    backward_prob_numeric,
    deviation_factor,
    forward_prob_closed,
    forward_prob_numeric,
    gadc_unitary,
    microrev_ratio,
    p_from_time,
)
from .states import BlochState, CoherenceBranch, EnergySpec, ThermalReservoir
from .sweeps import Regime, SweepGrid, diagonal_cut, find_extremum, gamma_curve, gamma_map

__version__ = "0.1.0"
