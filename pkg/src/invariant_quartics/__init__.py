"""Exact-arithmetic toolkit for invariant quartic surfaces.

Re-exports are curated in this module once the subpackages stabilize; import
from the submodules directly for anything not listed here.
"""

from __future__ import annotations

__version__ = "0.1.0"
