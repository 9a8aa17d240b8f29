"""Dependency analysis for a small functional language: evaluate to a
trace, then replay the trace forwards (availability) or backwards
(demand), with the two directions forming a Galois connection; dualize
to link selections between outputs computed from shared data."""

__version__ = "0.1.0"
