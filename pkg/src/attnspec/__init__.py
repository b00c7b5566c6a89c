"""Spectral capacity analysis for attention models.

Submodules:
    spectral     singular values, norms, effective rank
    attention    minimal transformer with manual backprop and trace capture
    bounds       closed-form generalization bounds and inequality verifiers
    rademacher   empirical Rademacher complexity of trace-norm balls
    experiments  synthetic tasks, training, gap measurement, power-law fits
    cli          command-line interface
"""

__version__ = "0.1.0"
