# Copyright (C) 2024 twyleg
"""
Twisted exponential sums, their bound envelopes, the explicit formula over zeta zeros
and partitions into squarefree parts.
"""

__version__ = "0.1.0"


class TwistedSumsError(Exception):
    """Root of every computational failure raised by this package."""
