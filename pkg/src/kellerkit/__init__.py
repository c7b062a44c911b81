"""Decide invertibility of Keller maps of the plane through K[P,Q][x+y]."""

__version__ = "0.1.0"

from .keller import PolyMap, compose, jacobian_det, keller_check  # noqa: E402
from .polyring import Polynomial, VarSet, parse_poly  # noqa: E402
from .ringchecks import Status, decide_invertible  # noqa: E402

__all__ = ["PolyMap", "Polynomial", "Status", "VarSet", "compose", "decide_invertible",
           "jacobian_det", "keller_check", "parse_poly"]
