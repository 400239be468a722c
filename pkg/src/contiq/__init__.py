"""Automated microstructure analysis for two-phase sintered alloys.

Binarizes micrographs, separates necked particles via chain-code
binding-point detection and pair matching, and computes line-intercept
stereology: particle size, binder fraction, interface counts, and the
contiguity of the particle network.
"""

__version__ = "0.1.0"
