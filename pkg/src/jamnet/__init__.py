"""Outage and error probability of cellular networks attacked by a jammer field."""

from ._backend import BACKEND
from .errors import ConvergenceError, DomainError, EmptyNetworkError, SpecError
from .geometry import JammerParams, NetworkParams, effective_density, jammer_radius
from .channel import make_constellation
from .outage import OutageQuery, outage_probability, simulate_outage
from .errorprob import SerQuery, apep, asep, simulate_ser
from .sizing import SizingPolicy, min_jammers
from .retx import RetxParams, drop_probability, retx_profile, steady_state_activity

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "DomainError",
    "EmptyNetworkError",
    "SpecError",
    "JammerParams",
    "NetworkParams",
    "effective_density",
    "jammer_radius",
    "make_constellation",
    "OutageQuery",
    "outage_probability",
    "simulate_outage",
    "SerQuery",
    "apep",
    "asep",
    "simulate_ser",
    "SizingPolicy",
    "min_jammers",
    "RetxParams",
    "drop_probability",
    "retx_profile",
    "steady_state_activity",
]
