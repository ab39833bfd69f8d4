"""Capacity and capacity-achieving input distributions of the
amplitude-constrained Poisson noise channel."""

try:
    from ._poissoncap import *  # noqa: F401,F403
    from ._poissoncap import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension next to the package
    from _poissoncap import *  # noqa: F401,F403
    from _poissoncap import __version__  # noqa: F401
