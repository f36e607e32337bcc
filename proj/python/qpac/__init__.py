"""Classical-shadow learning of quantum measurement classes.

Thin Python layer over the C++ core. The heavy lifting (shadow generation,
channel inversion, norms, extreme-point extraction, learners) lives in the
compiled extension; this package re-exports its public names.
"""

try:
    # Installed layout: the extension sits inside the package.
    from ._qpac import *  # noqa: F401,F403
    from ._qpac import __version__  # noqa: F401
except ImportError:
    # In-tree layout: the extension comes from the build directory.
    from _qpac import *  # noqa: F401,F403
    from _qpac import __version__  # noqa: F401
