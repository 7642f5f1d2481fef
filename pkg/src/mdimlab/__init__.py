"""Exact computational experiments around mean dimension of induced systems
on probability measures: tilings, independence sets, Wasserstein dynamics,
simplex-product covers and the mean-dimension lower bound."""

__version__ = "0.1.0"
