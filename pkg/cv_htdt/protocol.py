"""The hybrid analog teleportation-direct transmission (HTDT) protocol and its baselines.

Alice two-mode squeezes the input with her share of the resource (linear gain d), sends one encoder
output through the channel, and Bob mixes it with his share on a beamsplitter of transmissivity tau.
The result simulates a phase-insensitive channel of gain g = d x tau and added noise G.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Union

import numpy as np

from .errors import PhysicalityError, ValidationError
from .gaussian import (
    PSD_TOL,
    ChannelSpec,
    GaussianMap,
    GaussianState,
    ResourceTriplet,
    apply_map,
    embed_map,
    partial_trace,
    phase_insensitive_map,
    resource_to_state,
    tensor,
)
from .line_search import golden_section_search

__all__ = [
    "DEFAULT_D_MAX",
    "ProtocolParams",
    "SimulatedChannel",
    "OptimizationResult",
    "encoder",
    "decoder",
    "Stage",
    "protocol_stages",
    "initial_state",
    "run_protocol_matrix",
    "simulate_channel",
    "added_noise",
    "noise_qt",
    "noise_discarded",
    "noise_ef",
    "optimize_ef",
    "optimal_teleport_triplet",
    "g_prime",
    "htdt_beats_teleportation",
    "htdt_beats_fixed_resource",
    "stationary_points",
    "optimize_d",
]

logger = logging.getLogger(__name__)

# d_opt == DEFAULT_D_MAX stands for the d -> infinity (analog teleportation) regime
DEFAULT_D_MAX = 1e6

_GAIN_TOL = 1e-12
_SEARCH_TOL = 1e-10
_SIGMA_Z = np.diag([1.0, -1.0])
_I2 = np.eye(2)


@dataclass(frozen=True)
class ProtocolParams:
    """Encoder gain d, decoder transmissivity tau and overall gain g = d x tau."""

    d: float
    tau: float
    g: float

    @classmethod
    def from_gain(cls, g: float, d: float, channel: ChannelSpec) -> "ProtocolParams":
        """Derive tau = g / (d x) for a target gain."""
        if not g > 0:
            raise ValidationError(f"target gain must be positive, got g={g}", "g > 0")
        _check_encoding(channel, g, d)
        return cls(d=d, tau=min(g / (d * channel.x), 1.0), g=g).validate(channel)

    @classmethod
    def from_tau(cls, d: float, tau: float, channel: ChannelSpec) -> "ProtocolParams":
        """Derive g = d x tau."""
        return cls(d=d, tau=tau, g=d * channel.x * tau).validate(channel)

    def validate(self, channel: ChannelSpec) -> "ProtocolParams":
        """Raise ValidationError unless the parameters are consistent with `channel`."""
        if not self.d >= 1:
            raise ValidationError(f"encoder gain must be at least 1, got d={self.d}", "d >= 1")
        if not 0 < self.tau <= 1:
            raise ValidationError(f"decoder transmissivity out of range, got tau={self.tau}", "0 < tau <= 1")
        if not self.g > 0:
            raise ValidationError(f"target gain must be positive, got g={self.g}", "g > 0")
        if abs(self.g - self.d * channel.x * self.tau) > _GAIN_TOL * max(1.0, self.g):
            raise ValidationError(f"inconsistent gain g={self.g} for d={self.d}, tau={self.tau}", "g = d x tau")
        _check_encoding(channel, self.g, self.d)
        return self


@dataclass(frozen=True)
class SimulatedChannel:
    """The phase-insensitive channel realised by the protocol."""

    gain: float
    noise: float

    def is_completely_positive(self) -> bool:
        """Return True if noise >= |1 - gain|."""
        return self.noise >= abs(1 - self.gain) - PSD_TOL


@dataclass(frozen=True)
class OptimizationResult:
    """Optimal encoder gain and the noise it achieves.

    Unpacks as (d_opt, G_min). `teleportation_limit` is True when the optimum is the largest
    admissible d, i.e. the analog teleportation regime.
    """

    d_opt: float
    G_min: float
    teleportation_limit: bool

    def __iter__(self) -> Iterator[float]:
        """Yield d_opt then G_min."""
        yield self.d_opt
        yield self.G_min


def _check_encoding(channel: ChannelSpec, g: float, d: float) -> None:
    bound = max(g / channel.x, 1.0)
    if d < bound - _GAIN_TOL * bound:
        raise ValidationError(f"encoder gain d={d} too small for g={g}, x={channel.x}", "d >= max{g/x, 1}")


def encoder(d: float) -> GaussianMap:
    """Return the two-mode squeezer of linear gain d acting on (input, Alice's share)."""
    if not d >= 1:
        raise ValidationError(f"encoder gain must be at least 1, got d={d}", "d >= 1")
    s, t = math.sqrt(d), math.sqrt(d - 1)
    X = np.block([[s * _I2, t * _SIGMA_Z], [t * _SIGMA_Z, s * _I2]])
    return GaussianMap(X, np.zeros((4, 4)))


def decoder(tau: float) -> GaussianMap:
    """Return Bob's beamsplitter of transmissivity tau acting on (received mode, Bob's share)."""
    if not 0 < tau <= 1:
        raise ValidationError(f"decoder transmissivity out of range, got tau={tau}", "0 < tau <= 1")
    s, t = math.sqrt(tau), math.sqrt(1 - tau)
    X = np.block([[s * _I2, t * _I2], [-t * _I2, s * _I2]])
    return GaussianMap(X, np.zeros((4, 4)))


def _arm_carrying(X: np.ndarray, source: int) -> int:
    """Return the output arm whose coupling to input mode `source` is a positive multiple of the identity."""
    arms = []
    for k in range(X.shape[0] // 2):
        block = X[2 * k : 2 * k + 2, 2 * source : 2 * source + 2]
        s = block[0, 0]
        if s > 0 and np.allclose(block, s * _I2, rtol=0.0, atol=1e-12):
            arms.append(k)
    if len(arms) != 1:
        raise ValidationError(f"cannot identify the arm carrying input mode {source}: candidates {arms}")
    return arms[0]


@dataclass(frozen=True)
class Stage:
    """One step of the pipeline: a map on the whole register, then the modes that are kept."""

    name: str
    gmap: GaussianMap
    keep: List[int]


def protocol_stages(channel: ChannelSpec, params: ProtocolParams) -> List[Stage]:
    """Return the encode, transmit and decode stages acting on the register (input, Alice, Bob)."""
    channel.validate()
    params.validate(channel)
    enc = encoder(params.d)
    # the other encoder output is the conjugate arm and is discarded
    sent = _arm_carrying(enc.X, 0)
    dec = decoder(params.tau)
    return [
        Stage("encode", embed_map(enc, [0, 1], 3), [sent, 2]),
        # register is now (received, Bob)
        Stage("transmit", embed_map(phase_insensitive_map(channel), [0], 2), [0, 1]),
        Stage("decode", dec, [_arm_carrying(dec.X, 0)]),
    ]


def initial_state(input_state: GaussianState, resource: ResourceTriplet) -> GaussianState:
    """Return input (x) resource, the three-mode register the protocol starts from."""
    if input_state.modes != 1:
        raise ValidationError(f"input state must be single-mode, got {input_state.modes} modes")
    return tensor(input_state, resource_to_state(resource))


def run_protocol_matrix(
    input_state: GaussianState, resource: ResourceTriplet, channel: ChannelSpec, params: ProtocolParams
) -> GaussianState:
    """Propagate a single-mode input through encoder, channel and decoder by explicit matrix algebra.

    input_state -- the state Alice wants to transfer.
    resource -- the entangled state shared by Alice (first mode) and Bob (second mode).
    channel -- the phase-insensitive communication channel.
    params -- encoder gain, decoder transmissivity and overall gain.
    """
    state = initial_state(input_state, resource)
    for stage in protocol_stages(channel, params):
        state = partial_trace(apply_map(stage.gmap, state), stage.keep)
        logger.debug("after %s: %d modes", stage.name, state.modes)
    return state


def _noise(resource: ResourceTriplet, channel: ChannelSpec, g: float, u: float) -> float:
    """Return the added noise as a function of u = 1/d, without range checks."""
    a, b, c = resource.a, resource.b, resource.c
    kept = g * (1 - u)
    lost = 1 - g * u / channel.x
    return kept * a + lost * b - 2 * c * math.sqrt(max(kept * lost, 0.0)) + g * channel.y * u / channel.x


def added_noise(resource: ResourceTriplet, channel: ChannelSpec, g: float, d: float) -> float:
    """Return the total added noise G of the protocol at encoder gain d and overall gain g."""
    if not g > 0:
        raise ValidationError(f"target gain must be positive, got g={g}", "g > 0")
    if not channel.x > 0:
        raise ValidationError(f"channel transmissivity must be positive, got x={channel.x}", "x > 0")
    _check_encoding(channel, g, d)
    return _noise(resource, channel, g, 1 / d)


def simulate_channel(resource: ResourceTriplet, channel: ChannelSpec, params: ProtocolParams) -> SimulatedChannel:
    """Return the gain and closed-form noise of the channel the protocol simulates."""
    params.validate(channel)
    simulated = SimulatedChannel(gain=params.g, noise=added_noise(resource, channel, params.g, params.d))
    if not simulated.is_completely_positive():
        raise PhysicalityError(f"simulated channel {simulated} is not completely positive", "G >= |1 - g|")
    return simulated


def noise_qt(resource: ResourceTriplet, g: float) -> float:
    """Return G_qt = g a + b - 2 sqrt(g) c, the noise of ideal teleportation (the d -> infinity limit)."""
    return g * resource.a + resource.b - 2 * math.sqrt(g) * resource.c


def noise_discarded(resource: ResourceTriplet, g: float, d: float) -> float:
    """Return G_dis, the noise of teleporting with a heterodyne measurement of the discarded encoder output."""
    if not d > 1:
        raise ValidationError(f"discarded-mode teleportation is singular at d={d}", "d > 1")
    k = g * d / (d - 1)
    return k * resource.a + resource.b - 2 * resource.c * math.sqrt(k) + g / (d - 1)


def noise_ef(channel: ChannelSpec, g: float, d: float) -> float:
    """Return G_ef, the noise of amplified direct transmission with no entanglement."""
    if not g > 0:
        raise ValidationError(f"target gain must be positive, got g={g}", "g > 0")
    _check_encoding(channel, g, d)
    return 1 + g + (channel.y - (1 + channel.x)) / channel.x * (g / d)


def optimize_ef(channel: ChannelSpec, g: float) -> OptimizationResult:
    """Minimize G_ef over d.

    G_ef is linear in 1/d: the smallest admissible d is optimal unless the channel is
    entanglement-breaking, in which case d -> infinity (reported as math.inf) gives G_ef = 1 + g.
    """
    channel.validate()
    if not g > 0:
        raise ValidationError(f"target gain must be positive, got g={g}", "g > 0")
    if channel.is_entanglement_breaking():
        return OptimizationResult(d_opt=math.inf, G_min=1 + g, teleportation_limit=True)
    d = max(g / channel.x, 1.0)
    return OptimizationResult(d_opt=d, G_min=noise_ef(channel, g, d), teleportation_limit=False)


def optimal_teleport_triplet(r: float, g: float, b: Optional[float] = None) -> ResourceTriplet:
    """Return the resource with log-negativity 2r that minimizes the teleportation noise at gain g.

    The minimum is G_qt* = e^{-2r}(1 + g); it needs tanh r <= g <= coth r and b >= b*.
    Without `b`, the minimal-energy choice b = b* is returned.
    """
    if not r > 0:
        raise ValidationError(f"log-negativity parameter must be positive, got r={r}", "r > 0")
    lo, hi = math.tanh(r), 1 / math.tanh(r)
    if not lo - _GAIN_TOL <= g <= hi + _GAIN_TOL:
        raise ValidationError(f"gain g={g} outside [{lo}, {hi}]", "tanh(r) <= g <= coth(r)")
    e = math.exp(-2 * r)
    denominator = g + 1 - math.exp(2 * r) * abs(g - 1)
    if denominator <= 0:
        raise ValidationError(f"gain g={g} at the edge of the admissible range needs an unbounded resource")
    b_star = (math.exp(2 * r) * g + e - abs(g - 1)) / denominator
    if b is None:
        b = b_star
    elif b < b_star - _GAIN_TOL * b_star:
        raise ValidationError(f"b={b} below the physical minimum {b_star}", "b >= b*")
    return ResourceTriplet(a=(b + e * (g - 1)) / g, b=b, c=(b - e) / math.sqrt(g))


def g_prime(resource: ResourceTriplet, channel: ChannelSpec, g: float) -> float:
    """Return G', the coefficient of 1/d in the large-d expansion G = G_qt + G'/d + o(1/d)."""
    a, b, c = resource.a, resource.b, resource.c
    x, y = channel.x, channel.y
    return -g * (a + b / x) + c * math.sqrt(g) * (g + x) / x + g * y / x


def htdt_beats_teleportation(r: float, channel: ChannelSpec) -> bool:
    """Return True iff a finite encoder gain beats teleportation optimized over resources of log-negativity 2r."""
    if not r >= 0:
        raise ValidationError(f"log-negativity parameter must be non-negative, got r={r}", "r >= 0")
    return not channel.reduces_entanglement(r)


def htdt_beats_fixed_resource(resource: ResourceTriplet, channel: ChannelSpec, g: float) -> bool:
    """Return True if G' < 0, i.e. some finite d beats d -> infinity for this particular resource."""
    if not g > 0:
        raise ValidationError(f"target gain must be positive, got g={g}", "g > 0")
    a, b, c = resource.a, resource.b, resource.c
    return channel.y < a * channel.x + b - c * (g + channel.x) / math.sqrt(g)


def stationary_points(resource: ResourceTriplet, channel: ChannelSpec, g: float) -> List[float]:
    """Return the admissible encoder gains where dG/dd = 0, ascending.

    In u = 1/d the stationarity condition is A = c sqrt(g) P'(u) / sqrt(P(u)) with
    P(u) = (1 - u)(1 - k u), k = g/x and A = -g a - k b + g y / x. Squaring gives a quadratic in u;
    roots where A and P' disagree in sign were introduced by the squaring and are dropped.
    """
    a, b, c = resource.a, resource.b, resource.c
    k = g / channel.x
    A = -g * a - k * b + g * channel.y / channel.x
    cg = c * c * g
    coefficients = [
        A * A * k - 4 * cg * k * k,
        -A * A * (1 + k) + 4 * cg * k * (1 + k),
        A * A - cg * (1 + k) ** 2,
    ]
    if c == 0 or all(abs(q) < 1e-300 for q in coefficients):
        return []
    u_max = 1 / max(k, 1.0)
    found = []
    for root in np.roots(np.trim_zeros(coefficients, "f")):
        if abs(root.imag) > 1e-12:
            continue
        u = float(root.real)
        if not 0 < u <= u_max:
            continue
        slope = -(1 + k) + 2 * k * u
        if (1 - u) * (1 - k * u) > 0 and A * slope >= 0:
            found.append(1 / u)
    return sorted(found)


def optimize_d(
    resource: ResourceTriplet, channel: ChannelSpec, g: float, d_max: Union[float, int] = DEFAULT_D_MAX
) -> OptimizationResult:
    """Minimize the added noise over d in [max{g/x, 1}, d_max].

    G is convex in 1/d, so a golden-section search over ln(1/d) (relative tolerance 1e-10 in d)
    finds the minimum; the analytic stationary points are compared with it. When G is flat, the
    smallest admissible d is returned.
    """
    channel.validate()
    if not g > 0:
        raise ValidationError(f"target gain must be positive, got g={g}", "g > 0")
    d_min = max(g / channel.x, 1.0)
    if not d_max >= d_min:
        raise ValidationError(f"d_max={d_max} below the smallest admissible d={d_min}", "d_max >= max{g/x, 1}")

    def noise_at(s: float) -> float:
        return _noise(resource, channel, g, math.exp(s))

    lo, hi = -math.log(d_max), -math.log(d_min)
    found = golden_section_search(noise_at, lo, hi, tol=_SEARCH_TOL)
    if found.argmin == lo:
        d_best = float(d_max)
    elif found.argmin == hi:
        d_best = d_min
    else:
        d_best = math.exp(-found.argmin)
    g_best = found.minimum
    for d in stationary_points(resource, channel, g):
        if d_min <= d <= d_max:
            noise = _noise(resource, channel, g, 1 / d)
            if noise < g_best:
                d_best, g_best = d, noise

    # when G falls all the way to d_max the interior estimate lands within rounding of G(d_max)
    g_at_max = _noise(resource, channel, g, 1 / d_max)
    if d_best != d_max and g_at_max <= g_best + 1e-12 * max(1.0, abs(g_best)):
        d_best, g_best = float(d_max), g_at_max

    g_at_min = _noise(resource, channel, g, 1 / d_min)
    if g_at_min <= g_best + 1e-12 * max(1.0, abs(g_best)):
        d_best, g_best = d_min, min(g_at_min, g_best)
    logger.debug("optimize_d: d in [%g, %g], d_opt=%.10g, G_min=%.10g", d_min, d_max, d_best, g_best)
    return OptimizationResult(d_opt=d_best, G_min=g_best, teleportation_limit=d_best == d_max)
