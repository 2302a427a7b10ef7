"""LTLf strategy classification and responsibility verdicts.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (  # noqa: F401
    FormulaParseError,
    Problem,
    ValidationError,
    plant_example,
)

__all__ = ["Problem", "plant_example", "ValidationError", "FormulaParseError"]
