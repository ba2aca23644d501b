"""Entropy of finite-dimensional quantum states over pure-state phase space.

Thin wrapper around the C++ extension; see the individual function
docstrings. The `qent` CLI ships alongside for file-based workflows.
"""

try:
    from qent._qent import *  # noqa: F401,F403  (installed layout)
    from qent._qent import __version__  # noqa: F401
except ImportError:  # in-tree builds put the extension on PYTHONPATH
    from _qent import *  # noqa: F401,F403
    from _qent import __version__  # noqa: F401
