"""Python surface of the acquisim simulation core.

The compiled extension lives next to this package in an installed wheel.
During development the build tree's module directory can be put on
PYTHONPATH instead, in which case the extension is importable top level.
"""

try:
    from ._acquisim import *  # noqa: F401,F403
    from ._acquisim import __doc__  # noqa: F401
except ImportError:
    from _acquisim import *  # noqa: F401,F403
    from _acquisim import __doc__  # noqa: F401
