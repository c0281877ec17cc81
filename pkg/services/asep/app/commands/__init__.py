"""
CLI subcommands, one module each.
"""
from . import ldp, params, partition, profile, semiinf, simulate, stationary, validate

# Model subcommands take the rate flags; validate does not.
MODEL_COMMANDS = (params, stationary, profile, partition, ldp, semiinf, simulate)

__all__ = ["MODEL_COMMANDS", "validate"]
