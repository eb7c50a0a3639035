"""Entanglement from relativistic cavity motion: Bogoliubov coefficients,
Gaussian covariance tools and resonant two-mode squeezing gates."""

from ._relcav import *  # noqa: F401,F403
from ._relcav import __version__  # noqa: F401
