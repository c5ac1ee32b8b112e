"""Photon-modulated coherent states of the generalized isotonic oscillator.

Closed-form expressions (normal-ordered expansions, Laguerre-form norms,
moment sums, quasi-probability and fidelity formulas) paired with an
independent truncated Fock-space matrix oracle, plus sweep tooling that
emits figure-ready data.
"""

__version__ = "0.1.0"
