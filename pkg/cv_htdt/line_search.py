"""Golden-section search for one-dimensional minimization."""

import logging
import math
from dataclasses import dataclass
from typing import Callable

from .errors import ValidationError

__all__ = [
    "LineSearchResult",
    "golden_section_search",
]

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class LineSearchResult:
    """Minimizer of a golden-section search."""

    argmin: float
    minimum: float
    iterations: int


def golden_section_search(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> LineSearchResult:
    """Minimize a unimodal `f` on [lo, hi].

    The bracket shrinks until it is narrower than `tol`; the endpoints are compared with the
    interior estimate, so a minimum sitting on the boundary is returned exactly.

    f -- the function to minimize, unimodal on [lo, hi].
    lo, hi -- the search interval.
    tol -- absolute width of the final bracket.
    """
    if not lo <= hi:
        raise ValidationError(f"invalid search interval [{lo}, {hi}]", "lo <= hi")
    if not tol > 0:
        raise ValidationError(f"tolerance must be positive, got {tol}")
    f_lo, f_hi = f(lo), f(hi)
    a, b = lo, hi
    h = b - a
    n = 0
    if h > tol:
        # steps required to reach tolerance
        n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
        c = a + INV_PHI_SQUARE * h
        d = a + INV_PHI * h
        yc, yd = f(c), f(d)
        for _ in range(n - 1):
            if yc < yd:
                b, d, yd = d, c, yc
                h *= INV_PHI
                c = a + INV_PHI_SQUARE * h
                yc = f(c)
            else:
                a, c, yc = c, d, yd
                h *= INV_PHI
                d = a + INV_PHI * h
                yd = f(d)
        mid = (c, yc) if yc < yd else (d, yd)
    else:
        mid = (lo, f_lo)

    # boundary minima win ties against the interior estimate
    best = min([(f_lo, 0, lo), (f_hi, 1, hi), (mid[1], 2, mid[0])])
    logger.debug("golden section on [%g, %g]: argmin %.12g after %d steps", lo, hi, best[2], n)
    return LineSearchResult(argmin=best[2], minimum=best[0], iterations=n)
