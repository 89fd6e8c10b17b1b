"""Entanglement distribution from Charlie to Alice and Bob through lossy links.

Charlie sits on the perpendicular bisector of the Alice-Bob segment, at height h_C, and sends each half
of a pure two-mode squeezed vacuum through a pure-loss link. Every link loses gamma dB per meter.
"""

import functools
import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional

import pandas as pd

from .errors import ValidationError
from .fidelity import fidelity_from_noise
from .gaussian import (
    ChannelSpec,
    ResourceTriplet,
    apply_map_to_modes,
    phase_insensitive_map,
    resource_to_state,
    state_to_resource,
)
from .protocol import DEFAULT_D_MAX, noise_qt, optimize_d, optimize_ef

__all__ = [
    "FIG5_COLUMNS",
    "GeometryConfig",
    "SourceSpec",
    "transmissivity",
    "distribute_resource",
    "distributed_log_negativity",
    "distributed_htdt_threshold",
    "position_independent_threshold",
    "htdt_condition_distributed",
    "sweep_fig5",
]

logger = logging.getLogger(__name__)

FIG5_COLUMNS = ["h_C", "r_C", "x_C", "two_r_distributed", "F_an", "F_qt", "F_ef", "d_opt"]


def transmissivity(distance: float, gamma: float) -> float:
    """Return the power transmission 10^{-gamma D / 10} over `distance` meters at `gamma` dB/m."""
    if not distance >= 0:
        raise ValidationError(f"distance must be non-negative, got {distance}", "D >= 0")
    if not gamma >= 0:
        raise ValidationError(f"loss rate must be non-negative, got {gamma}", "gamma >= 0")
    return 10 ** (-gamma * distance / 10)


@dataclass(frozen=True)
class GeometryConfig:
    """Alice-Bob distance D_AB (m), Charlie's height h_C above their axis (m), and loss rate gamma (dB/m)."""

    D_AB: float
    h_C: float
    gamma: float

    def __post_init__(self):
        """Check the distances and loss rate."""
        if not self.D_AB > 0:
            raise ValidationError(f"Alice-Bob distance must be positive, got {self.D_AB}", "D_AB > 0")
        if not self.h_C >= 0:
            raise ValidationError(f"Charlie's height must be non-negative, got {self.h_C}", "h_C >= 0")
        if not self.gamma >= 0:
            raise ValidationError(f"loss rate must be non-negative, got {self.gamma}", "gamma >= 0")

    @classmethod
    def from_distances(cls, D_AB: float, D_CA: float, D_CB: float, gamma: float) -> "GeometryConfig":
        """Build from the three pairwise distances; Charlie must be equidistant from Alice and Bob."""
        if abs(D_CA - D_CB) > 1e-12 * max(D_CA, D_CB, 1.0):
            raise ValidationError(
                f"Charlie is not equidistant from Alice and Bob (D_CA={D_CA}, D_CB={D_CB}); "
                "asymmetric placements are not supported",
                "D_CA = D_CB",
            )
        if D_CA + D_CB < D_AB:
            raise ValidationError(f"distances {D_AB}, {D_CA}, {D_CB} violate the triangle inequality")
        return cls(D_AB=D_AB, h_C=math.sqrt(max(D_CA**2 - (D_AB / 2) ** 2, 0.0)), gamma=gamma)

    @classmethod
    def from_transmissivity(cls, x_AB: float, h_C: float, gamma: float) -> "GeometryConfig":
        """Build from the Alice-Bob transmissivity instead of their distance."""
        if not 0 < x_AB < 1:
            raise ValidationError(f"Alice-Bob transmissivity out of range, got {x_AB}", "0 < x_AB < 1")
        if not gamma > 0:
            raise ValidationError(f"a lossy Alice-Bob link needs a positive loss rate, got {gamma}", "gamma > 0")
        return cls(D_AB=-10 * math.log10(x_AB) / gamma, h_C=h_C, gamma=gamma)

    @property
    def D_C(self) -> float:
        """Charlie's distance to Alice (and to Bob)."""
        return math.hypot(self.D_AB / 2, self.h_C)

    @property
    def x_AB(self) -> float:
        """Alice-Bob transmissivity."""
        return transmissivity(self.D_AB, self.gamma)

    @property
    def x_C(self) -> float:
        """Charlie-Alice (and Charlie-Bob) transmissivity."""
        return transmissivity(self.D_C, self.gamma)


@dataclass(frozen=True)
class SourceSpec:
    """Charlie's pure symmetric two-mode squeezed vacuum, log-negativity 2 r_C."""

    r_C: float

    def __post_init__(self):
        """Reject negative squeezing."""
        if not self.r_C >= 0:
            raise ValidationError(f"source squeezing must be non-negative, got r_C={self.r_C}", "r_C >= 0")


def _check_transmissivity(name: str, x: float) -> None:
    if not 0 < x <= 1:
        raise ValidationError(f"{name} out of range, got {x}", f"0 < {name} <= 1")


def distribute_resource(source: SourceSpec, x_C: float) -> ResourceTriplet:
    """Return the resource Alice and Bob share after each arm of Charlie's state crosses a pure-loss link."""
    _check_transmissivity("x_C", x_C)
    state = resource_to_state(ResourceTriplet.two_mode_squeezed_vacuum(source.r_C))
    loss = phase_insensitive_map(ChannelSpec.quantum_limited_attenuator(x_C))
    for arm in (0, 1):
        state = apply_map_to_modes(loss, state, [arm])
    return state_to_resource(state)


def distributed_log_negativity(source: SourceSpec, x_C: float) -> float:
    """Return 2r = -log(1 - x_C + x_C e^{-2 r_C}), the log-negativity Alice and Bob end up with."""
    _check_transmissivity("x_C", x_C)
    return -math.log(1 - x_C + x_C * math.exp(-2 * source.r_C))


def distributed_htdt_threshold(x_C: float, x_AB: float) -> float:
    """Return the 2 r_C below which a finite encoder gain beats teleportation; math.inf if it always does."""
    argument = 1 - 2 * x_AB / (x_C * (1 + x_AB))
    if argument <= 0:
        return math.inf
    return -math.log(argument)


def position_independent_threshold(x_AB: float) -> float:
    """Return the 2 r_C below which a finite encoder gain beats teleportation wherever Charlie sits."""
    _check_transmissivity("x_AB", x_AB)
    return distributed_htdt_threshold(math.sqrt(x_AB), x_AB)


def htdt_condition_distributed(source: SourceSpec, x_C: float, x_AB: float) -> bool:
    """Return True if the protocol with finite d beats teleportation on the distributed resource.

    The communication channel is the pure-loss link (x_AB, 1 - x_AB).
    """
    _check_transmissivity("x_C", x_C)
    _check_transmissivity("x_AB", x_AB)
    if x_AB < x_C**2 - 1e-12:
        raise ValidationError(f"x_AB={x_AB} below x_C^2={x_C ** 2}", "x_AB >= x_C^2 (triangle inequality)")
    threshold = distributed_htdt_threshold(x_C, x_AB)
    if math.isinf(threshold):
        logger.info("x_C=%g, x_AB=%g: a finite encoder gain wins for every source squeezing", x_C, x_AB)
    return 2 * source.r_C < threshold


def _fig5_row(base: GeometryConfig, d_max: float, point) -> List[float]:
    h_C, r_C = point
    geometry = replace(base, h_C=h_C)
    x_C = geometry.x_C
    source = SourceSpec(r_C)
    resource = distribute_resource(source, x_C)
    channel = ChannelSpec.quantum_limited_attenuator(geometry.x_AB)

    found = optimize_d(resource, channel, 1.0, d_max=d_max)
    d_opt, g_an = found.d_opt, found.G_min
    g_qt = noise_qt(resource, 1.0)
    # the d -> infinity limit belongs to the strategies searched
    if g_qt < g_an:
        d_opt, g_an = math.inf, g_qt
    logger.debug("fig5 h_C=%g r_C=%g: x_C=%g d_opt=%g", h_C, r_C, x_C, d_opt)
    return [
        h_C,
        r_C,
        x_C,
        distributed_log_negativity(source, x_C),
        fidelity_from_noise(g_an),
        fidelity_from_noise(g_qt),
        fidelity_from_noise(optimize_ef(channel, 1.0).G_min),
        d_opt,
    ]


def sweep_fig5(
    base: GeometryConfig,
    h_C_values: Iterable[float],
    r_C_values: Iterable[float],
    d_max: float = DEFAULT_D_MAX,
    executor: Optional[Executor] = None,
) -> pd.DataFrame:
    """Return the uniform-codebook fidelities at g = 1 for every (h_C, r_C), ordered by h_C then r_C.

    F_qt uses the distributed resource itself, not the optimal teleportation resource, so that all
    three protocols are compared on the same physical state. F_ef is optimized over its own d.

    base -- Alice-Bob geometry and loss rate; its h_C is replaced by each sweep value.
    h_C_values -- Charlie's heights above the Alice-Bob axis, meters.
    r_C_values -- half log-negativities of Charlie's source.
    d_max -- largest encoder gain searched; d_opt is inf when teleportation itself is best.
    executor -- evaluates points in parallel when given; row order does not depend on it.
    """
    points = [(float(h), float(r)) for h in sorted(h_C_values) for r in sorted(r_C_values)]
    evaluate = functools.partial(_fig5_row, base, d_max)
    rows = list(executor.map(evaluate, points)) if executor is not None else [evaluate(p) for p in points]
    return pd.DataFrame(rows, columns=FIG5_COLUMNS)
