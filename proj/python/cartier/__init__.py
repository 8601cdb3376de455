"""Test modules, F-jumping numbers and V-filtrations over F_p.

Polynomials, matrices and rationals are passed in the CLI syntax:
``"x^2*y + 1"``, ``"0,1;1,0"`` and ``"1/2"``.
"""

from ._cartier import (
    CartierError,
    check,
    check_suites,
    fpt,
    jumps,
    repro,
    repro_targets,
    tau,
    vfilt,
)

__all__ = [
    "CartierError",
    "check",
    "check_suites",
    "fpt",
    "jumps",
    "repro",
    "repro_targets",
    "tau",
    "vfilt",
]
