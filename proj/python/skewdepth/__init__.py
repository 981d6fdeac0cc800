"""Half-space and expectile depth for skew-t and generalized hyperbolic laws."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
