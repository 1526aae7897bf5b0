"""Long-range random walk laboratory: fractal graphs, heavy-tailed kernels,
and the decay clocks that govern their on-diagonal behavior."""

try:
    from walklab._walklab import *  # noqa: F401,F403
except ImportError:  # in-tree runs put the built module directly on the path
    from _walklab import *  # noqa: F401,F403

__version__ = "0.1.0"
