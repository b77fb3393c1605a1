"""Sum-space spectral solver for (lambda I + mu H + eta d/dx + (-Delta)^{1/2}) u = f on the real line."""

from ._fracsum import *  # noqa: F401,F403
from ._fracsum import __doc__  # noqa: F401

__version__ = "0.1.0"
