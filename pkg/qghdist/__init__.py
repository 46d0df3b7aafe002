"""
.. include:: ../README.md
"""

__docformat__ = "restructuredtext"
from qghdist.api import algebra, freefield, ghdist, lipnorm, nets

from qghdist import utils
from qghdist.__version__ import __version__


__all__ = ["algebra", "lipnorm", "nets", "ghdist", "freefield", "utils", "__version__"]
