"""SIML integrated covariance estimation and its kernel diagnostics."""

__version__ = "0.1.0"
