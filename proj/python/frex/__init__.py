"""Feature extraction corpus toolkit: Python bindings over the C++ core."""

try:
    from frex._frex import *  # noqa: F401,F403  (installed wheel layout)
    from frex._frex import __doc__ as _core_doc
except ImportError:
    from _frex import *  # noqa: F401,F403  (build tree layout)
    from _frex import __doc__ as _core_doc

__version__ = "0.3.0"
