"""Desk-scale workbench for locally testable codes.

Builds generalized Hadamard and long codes, dependence and ring-constraint
testers, concatenated and alphabet-increased testers, separable replacement
testers, and end-to-end alphabet-reduction pipelines, verifying every
closed-form distance/rate/soundness bound with exact rational arithmetic.
"""

__version__ = "0.1.0"
