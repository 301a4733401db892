try:
    from ._nlab import *  # noqa: F401,F403
except ImportError:  # build-tree layout: extension next to the package dir
    from _nlab import *  # noqa: F401,F403

__version__ = "0.1.0"
