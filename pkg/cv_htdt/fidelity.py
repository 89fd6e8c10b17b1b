"""Average fidelities for Gaussian codebooks of coherent states."""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import pandas as pd
from scipy.optimize import bisect

from .errors import PhysicalityError, ValidationError
from .gaussian import PSD_TOL, ChannelSpec, ResourceTriplet
from .protocol import DEFAULT_D_MAX, optimize_d

__all__ = [
    "NO_CLONING_THRESHOLD",
    "FIG3_COLUMNS",
    "CodebookSpec",
    "UNIFORM_CODEBOOK",
    "avg_fidelity",
    "fidelity_from_noise",
    "fidelity_qt",
    "fidelity_an",
    "fidelity_ef",
    "optimized_fidelity",
    "infidelity_ratio",
    "ef_beats_teleportation",
    "no_cloning_entanglement",
    "no_cloning_entanglement_numeric",
    "fig3_table",
]

logger = logging.getLogger(__name__)

NO_CLONING_THRESHOLD = 2 / 3

FIG3_COLUMNS = ["x", "F_qt", "F_an", "F_ef", "delta_qt", "delta_an", "d_opt", "r_nc"]


@dataclass(frozen=True)
class CodebookSpec:
    """Coherent states |alpha> drawn with density (lam / pi) exp(-lam |alpha|^2); lam = 0 is the uniform limit."""

    lam: float = 0.0

    def __post_init__(self):
        """Reject negative widths."""
        if not self.lam >= 0:
            raise ValidationError(f"codebook inverse width must be non-negative, got {self.lam}", "lambda >= 0")


UNIFORM_CODEBOOK = CodebookSpec(0.0)


def avg_fidelity(g: float, G: float, codebook: CodebookSpec = UNIFORM_CODEBOOK) -> float:
    """Return the codebook-averaged fidelity of a phase-insensitive channel with gain g and noise G.

    For lam > 0 this is 2 lam / [2 (1 - sqrt g)^2 + lam (1 + g + G)]; the uniform limit lam = 0 is
    exactly 2 / (2 + G) at g = 1 and 0 otherwise.
    """
    if not g > 0:
        raise ValidationError(f"gain must be positive, got g={g}", "g > 0")
    if G < abs(1 - g) - PSD_TOL:
        raise PhysicalityError(f"noise G={G} too small for gain g={g}", "G >= |1 - g|")
    if codebook.lam == 0:
        return 2 / (2 + G) if g == 1 else 0.0
    lam = codebook.lam
    return 2 * lam / (2 * (1 - math.sqrt(g)) ** 2 + lam * (1 + g + G))


def fidelity_from_noise(G: float) -> float:
    """Return the uniform-codebook fidelity 2 / (2 + G) of a unit-gain channel."""
    return avg_fidelity(1.0, G)


def fidelity_qt(r: float) -> float:
    """Return 1 / (1 + e^{-2r}), teleportation with the optimal resource of log-negativity 2r."""
    return 1 / (1 + math.exp(-2 * r))


def _check_attenuator(x: float) -> None:
    if not 0 < x <= 1:
        raise ValidationError(f"attenuator transmissivity out of range, got x={x}", "0 < x <= 1")


def fidelity_an(r: float, x: float) -> float:
    """Return the fidelity of the protocol optimized over d, through the quantum-limited attenuator (x, 1 - x).

    The resource is (cosh 2r, cosh 2r, sinh 2r) and g = 1. Teleportation is optimal up to x = tanh r.
    """
    _check_attenuator(x)
    if x <= math.tanh(r):
        return fidelity_qt(r)
    return 2 * x / (1 + x * (2 - x) - (1 - x) ** 2 * math.cosh(2 * r))


def fidelity_ef(x: float) -> float:
    """Return 1 / (2 - x), amplified direct transmission with no entanglement through the attenuator (x, 1 - x)."""
    return 1 / (2 - x)


def optimized_fidelity(
    resource: ResourceTriplet,
    channel: ChannelSpec,
    codebook: CodebookSpec = UNIFORM_CODEBOOK,
    g: float = 1.0,
    d_max: float = DEFAULT_D_MAX,
) -> float:
    """Return the average fidelity at gain g after minimizing the noise over d, for any channel."""
    return avg_fidelity(g, optimize_d(resource, channel, g, d_max=d_max).G_min, codebook)


def infidelity_ratio(r: float, x: float) -> Tuple[float, float]:
    """Return (delta_qt, delta_an), the ratios (1 - F_ef) / (1 - F) for teleportation and the protocol."""
    f_ef = fidelity_ef(x)
    ratios = []
    for f in (fidelity_qt(r), fidelity_an(r, x)):
        if f >= 1:
            raise ValidationError(f"infidelity ratio undefined for a perfect protocol at r={r}, x={x}", "x < 1")
        ratios.append((1 - f_ef) / (1 - f))
    return ratios[0], ratios[1]


def ef_beats_teleportation(r: float, x: float) -> bool:
    """Return True if direct transmission without entanglement beats teleportation, i.e. x > 1 - e^{-2r}."""
    _check_attenuator(x)
    return x > 1 - math.exp(-2 * r)


def no_cloning_entanglement(x: float) -> float:
    """Return the log-negativity 2r the optimized protocol needs to reach fidelity 2/3 through (x, 1 - x)."""
    _check_attenuator(x)
    if x <= 1 / 3:
        return math.log(2)
    if x < 1 / 2:
        return 2 * math.asinh(math.sqrt(x * (1 - 2 * x) / (2 * (1 - x) ** 2)))
    return 0.0


def no_cloning_entanglement_numeric(x: float, xtol: float = 1e-10) -> float:
    """Return 2r such that fidelity_an(r, x) = 2/3, found by bisection on r."""
    _check_attenuator(x)
    if fidelity_ef(x) >= NO_CLONING_THRESHOLD:
        return 0.0
    r_hi = math.log(2) / 2 + 0.1
    return 2 * bisect(lambda r: fidelity_an(r, x) - NO_CLONING_THRESHOLD, 0.0, r_hi, xtol=xtol)


def fig3_table(r: float, xs: Iterable[float], d_max: float = DEFAULT_D_MAX) -> pd.DataFrame:
    """Return one row per transmissivity: fidelities, infidelity ratios, optimal d and no-cloning entanglement.

    r -- half the log-negativity of the pure resource (cosh 2r, cosh 2r, sinh 2r).
    xs -- transmissivities of the quantum-limited attenuator, each in (0, 1).
    d_max -- the largest encoder gain searched; d_opt == d_max marks the teleportation regime.
    """
    if not r > 0:
        raise ValidationError(f"log-negativity parameter must be positive, got r={r}", "r > 0")
    resource = ResourceTriplet.two_mode_squeezed_vacuum(r)
    rows = []
    for x in xs:
        x = float(x)
        delta_qt, delta_an = infidelity_ratio(r, x)
        found = optimize_d(resource, ChannelSpec.quantum_limited_attenuator(x), 1.0, d_max=d_max)
        logger.debug("fig3 x=%g: d_opt=%g", x, found.d_opt)
        rows.append(
            [
                x,
                fidelity_qt(r),
                fidelity_an(r, x),
                fidelity_ef(x),
                delta_qt,
                delta_an,
                found.d_opt,
                no_cloning_entanglement(x),
            ]
        )
    return pd.DataFrame(rows, columns=FIG3_COLUMNS)
