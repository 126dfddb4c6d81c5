"""Exact solutions, symmetries and reductions of the two-dimensional Burgers system

    u_t + u u_x + v u_y = u_xx + u_yy,
    v_t + u v_x + v v_y = v_xx + v_yy.
"""
from .errors import (BurgersLabError, ConfigError, NumericError, ParameterOutOfDomain,
                     SingularPoint, VerificationFailure)
from .fields import Grid, Point, SpaceTimeField

__version__ = "0.1.0"

__all__ = ["BurgersLabError", "ConfigError", "NumericError", "ParameterOutOfDomain", "SingularPoint",
           "VerificationFailure", "Grid", "Point", "SpaceTimeField", "__version__"]
