"""Phase-space Monte-Carlo estimate of the protocol output moments.

Each sample is a classical phase-space point drawn with covariance cov/2 (the vacuum-unit convention
counts the anticommutator, so the classical covariance is half of it). Samples pass through the X
matrices of every stage and pick up Gaussian noise of covariance Y/2. This reproduces first and second
moments of Gaussian channels exactly; it says nothing about non-Gaussian features.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import ValidationError
from .gaussian import ChannelSpec, GaussianState, ResourceTriplet
from .protocol import ProtocolParams, Stage, initial_state, protocol_stages

__all__ = [
    "MIN_SAMPLES",
    "OracleEstimate",
    "monte_carlo_oracle",
]

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000


@dataclass(frozen=True, eq=False)
class OracleEstimate:
    """Estimated output moments in vacuum units, with their standard errors."""

    first_moments: np.ndarray
    covariance: np.ndarray
    first_moments_stderr: np.ndarray
    covariance_stderr: np.ndarray
    n_samples: int

    def agrees_with(self, state: GaussianState, n_sigma: float = 3.0) -> bool:
        """Return True if every moment of `state` lies within n_sigma standard errors of the estimate."""
        dv = np.abs(self.first_moments - state.first_moments)
        dcov = np.abs(self.covariance - state.covariance)
        within_v = np.all(dv <= n_sigma * self.first_moments_stderr)
        return bool(within_v and np.all(dcov <= n_sigma * self.covariance_stderr))


def _shard_sizes(n_samples: int, shards: int) -> List[int]:
    base, extra = divmod(n_samples, shards)
    return [base + (1 if k < extra else 0) for k in range(shards)]


def _sample_shard(
    rng: np.random.Generator, n: int, start: GaussianState, stages: List[Stage]
) -> Tuple[int, np.ndarray, np.ndarray]:
    """Propagate n samples; return (n, mean, sum of squared deviations)."""
    z = rng.multivariate_normal(start.first_moments, start.covariance / 2, size=n)
    for stage in stages:
        z = z @ stage.gmap.X.T
        if np.any(stage.gmap.Y != 0):
            z = z + rng.multivariate_normal(np.zeros(len(stage.gmap.Y)), stage.gmap.Y / 2, size=n)
        idx = [q for k in stage.keep for q in (2 * k, 2 * k + 1)]
        z = z[:, idx]
    mean = z.mean(axis=0)
    dev = z - mean
    return n, mean, dev.T @ dev


def _merge(a: Tuple[int, np.ndarray, np.ndarray], b: Tuple[int, np.ndarray, np.ndarray]):
    """Combine two (n, mean, M2) summaries."""
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    delta = mb - ma
    mean = ma + delta * (nb / n)
    return n, mean, sa + sb + np.outer(delta, delta) * (na * nb / n)


def monte_carlo_oracle(
    input_state: GaussianState,
    resource: ResourceTriplet,
    channel: ChannelSpec,
    params: ProtocolParams,
    n_samples: int,
    seed: int,
    shards: int = 1,
) -> OracleEstimate:
    """Estimate the protocol output moments by sampling.

    input_state -- the single-mode state to transfer.
    resource -- the shared entangled resource.
    channel -- the communication channel.
    params -- encoder gain, decoder transmissivity and overall gain.
    n_samples -- total number of samples, at least MIN_SAMPLES.
    seed -- root seed; shard k draws from the k-th child of SeedSequence(seed), so a fixed
        (seed, n_samples, shards) gives bit-identical estimates on one platform.
    shards -- number of independent substreams; merged in shard order.
    """
    if int(n_samples) != n_samples or n_samples < MIN_SAMPLES:
        raise ValidationError(f"invalid sample count {n_samples}", f"integer n_samples >= {MIN_SAMPLES}")
    if int(shards) != shards or not 1 <= shards <= n_samples:
        raise ValidationError(f"invalid shard count {shards}", "1 <= shards <= n_samples")
    n_samples, shards = int(n_samples), int(shards)
    start = initial_state(input_state, resource)
    stages = protocol_stages(channel, params)

    summary = None
    children = np.random.SeedSequence(seed).spawn(shards)
    for child, size in zip(children, _shard_sizes(n_samples, shards)):
        logger.debug("monte carlo shard: %d samples", size)
        part = _sample_shard(np.random.Generator(np.random.Philox(child)), size, start, stages)
        summary = part if summary is None else _merge(summary, part)

    n, mean, m2 = summary
    cov = m2 / (n - 1)
    var = np.diag(cov)
    return OracleEstimate(
        first_moments=mean,
        covariance=2 * cov,
        first_moments_stderr=np.sqrt(var / n),
        covariance_stderr=2 * np.sqrt((np.outer(var, var) + cov**2) / n),
        n_samples=n,
    )
