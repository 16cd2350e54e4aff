"""Open-loop input synthesis for parameter-dependent linear ensembles."""

__version__ = "0.1.0"
