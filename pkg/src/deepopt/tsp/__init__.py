from .tsplib import TspInstance, TsplibError, load_optima, load_tsplib, parse_tsplib
from .tours import (
    MOVE_KINDS,
    Tour,
    hill_climb_trial,
    insert_move,
    is_permutation,
    random_tour,
    restart_hill_climb,
    swap_move,
    tour_cost,
    two_opt_move,
)
from .problem import TspProblem, encode_tour, interpret_connections

__all__ = [
    "TspInstance",
    "TsplibError",
    "load_optima",
    "load_tsplib",
    "parse_tsplib",
    "MOVE_KINDS",
    "Tour",
    "hill_climb_trial",
    "insert_move",
    "is_permutation",
    "random_tour",
    "restart_hill_climb",
    "swap_move",
    "tour_cost",
    "two_opt_move",
    "TspProblem",
    "encode_tour",
    "interpret_connections",
]
