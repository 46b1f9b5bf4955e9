"""stablab: a laboratory for stabilizer codes and low-depth circuit bounds.

Builds stabilizer codes and their commuting-projector Hamiltonians, the
circuits and channels acting on them (syndrome extraction, logical
depolarization, spectral amplification, approximate ground-state
projectors), and evaluates the closed-form circuit-depth lower bounds that
low-energy states of such Hamiltonians must obey. Every constructive claim
has a desk-scale numerical check; see the test suite and ``stablab bounds
suite``.
"""

__version__ = "0.1.0"
