import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
import pytest

from cv_htdt.distribution import (
    FIG5_COLUMNS,
    GeometryConfig,
    SourceSpec,
    distribute_resource,
    distributed_htdt_threshold,
    distributed_log_negativity,
    htdt_condition_distributed,
    position_independent_threshold,
    sweep_fig5,
    transmissivity,
)
from cv_htdt.errors import ValidationError
from cv_htdt.gaussian import ChannelSpec, log_negativity, resource_to_state
from cv_htdt.protocol import added_noise, htdt_beats_teleportation


def test_transmissivity():
    assert transmissivity(0.0, 1e-3) == 1.0
    assert transmissivity(1500.0, 1e-3) == pytest.approx(0.7079, abs=1e-4)
    assert transmissivity(750.0, 1e-3) == pytest.approx(math.sqrt(transmissivity(1500.0, 1e-3)), rel=1e-12)
    with pytest.raises(ValidationError):
        transmissivity(-1.0, 1e-3)


def test_geometry():
    geometry = GeometryConfig.from_transmissivity(0.7, h_C=0.0, gamma=1e-3)
    assert geometry.x_AB == pytest.approx(0.7, rel=1e-12)
    assert geometry.x_C == pytest.approx(math.sqrt(0.7), rel=1e-12)
    assert geometry.D_AB == pytest.approx(1549, abs=1)

    geometry = GeometryConfig.from_distances(2.0, math.sqrt(2), math.sqrt(2), gamma=1.0)
    assert geometry.h_C == pytest.approx(1.0)
    assert geometry.D_C == pytest.approx(math.sqrt(2))

    with pytest.raises(ValidationError, match="equidistant"):
        GeometryConfig.from_distances(2.0, 1.5, 2.0, gamma=1.0)
    with pytest.raises(ValidationError, match="triangle"):
        GeometryConfig.from_distances(5.0, 2.0, 2.0, gamma=1.0)
    with pytest.raises(ValidationError):
        GeometryConfig(D_AB=0.0, h_C=0.0, gamma=1.0)
    with pytest.raises(ValidationError):
        SourceSpec(-0.1)


def test_distribute_resource_examples():
    t = distribute_resource(SourceSpec(0.4), 1.0)
    assert (t.a, t.b, t.c) == pytest.approx((math.cosh(0.8), math.cosh(0.8), math.sinh(0.8)))
    t = distribute_resource(SourceSpec(0.0), 0.3)
    assert (t.a, t.b, t.c) == pytest.approx((1.0, 1.0, 0.0))
    t = distribute_resource(SourceSpec(1.05), 0.8367)
    assert (t.a, t.b, t.c) == pytest.approx((3.6309, 3.6309, 3.3651), abs=2e-4)
    assert log_negativity(resource_to_state(t)) == pytest.approx(1.3251, abs=2e-4)
    with pytest.raises(ValidationError):
        distribute_resource(SourceSpec(1.0), 0.0)


def test_distribution_matches_closed_forms(rng):
    for _ in range(1000):
        source = SourceSpec(rng.uniform(0, 1.5))
        x_c = rng.uniform(0.01, 1.0)
        t = distribute_resource(source, x_c)
        two_r = 2 * source.r_C
        assert t.a == pytest.approx(x_c * math.cosh(two_r) + 1 - x_c, abs=1e-10)
        assert t.b == pytest.approx(x_c * math.cosh(two_r) + 1 - x_c, abs=1e-10)
        assert t.c == pytest.approx(x_c * math.sinh(two_r), abs=1e-10)
        assert distributed_log_negativity(source, x_c) == pytest.approx(
            log_negativity(resource_to_state(t)), abs=1e-9
        )


def test_distributed_log_negativity():
    for x_c in (0.1, 0.5, 0.9):
        assert distributed_log_negativity(SourceSpec(25.0), x_c) == pytest.approx(-math.log(1 - x_c), abs=1e-6)
    assert distributed_log_negativity(SourceSpec(0.7), 1.0) == pytest.approx(1.4)
    assert distributed_log_negativity(SourceSpec(1.05), 0.8367) == pytest.approx(1.3251, abs=2e-4)

    xs = np.linspace(0.05, 1.0, 30)
    values = [distributed_log_negativity(SourceSpec(0.8), x) for x in xs]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))
    values = [distributed_log_negativity(SourceSpec(r), 0.6) for r in np.linspace(0, 3, 30)]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_matrix_path_at_large_squeezing():
    # pure TMSV at r_C = 8 has cosh(16) ~ 4.4e6 entries
    t = distribute_resource(SourceSpec(8.0), 0.8)
    e_n = log_negativity(resource_to_state(t))
    assert e_n == pytest.approx(distributed_log_negativity(SourceSpec(8.0), 0.8), rel=1e-6)
    assert e_n == pytest.approx(-math.log(0.2 + 0.8 * math.exp(-16)), rel=1e-6)
    with pytest.raises(ValidationError, match="ill-conditioned"):
        log_negativity(resource_to_state(distribute_resource(SourceSpec(25.0), 0.5)))


def test_htdt_condition_distributed_examples():
    x_c = math.sqrt(0.7)
    assert distributed_htdt_threshold(x_c, 0.7) == pytest.approx(4.154, abs=0.01)
    assert htdt_condition_distributed(SourceSpec(1.05), x_c, 0.7)
    assert htdt_condition_distributed(SourceSpec(0.0), 0.3, 0.5)
    # the threshold is unbounded when Charlie is far enough
    assert math.isinf(distributed_htdt_threshold(0.5, 0.5))
    assert htdt_condition_distributed(SourceSpec(30.0), 0.5, 0.5)
    with pytest.raises(ValidationError, match="triangle"):
        htdt_condition_distributed(SourceSpec(1.0), 0.9, 0.5)


def test_position_independent_threshold(rng):
    for _ in range(200):
        x_ab = rng.uniform(0.05, 0.99)
        threshold = position_independent_threshold(x_ab)
        source = SourceSpec(rng.uniform(0, threshold / 2) * 0.999)
        x_c = rng.uniform(0.01, math.sqrt(x_ab))
        assert htdt_condition_distributed(source, x_c, x_ab)


def test_condition_matches_theorem(rng):
    checked = 0
    for _ in range(1000):
        x_ab = rng.uniform(0.05, 0.99)
        x_c = rng.uniform(0.01, math.sqrt(x_ab))
        source = SourceSpec(rng.uniform(0, 2.0))
        threshold = distributed_htdt_threshold(x_c, x_ab)
        if abs(2 * source.r_C - threshold) < 1e-9:
            continue
        r = distributed_log_negativity(source, x_c) / 2
        expected = htdt_beats_teleportation(r, ChannelSpec.quantum_limited_attenuator(x_ab))
        assert htdt_condition_distributed(source, x_c, x_ab) == expected
        checked += 1
    assert checked > 990


def test_sweep_fig5_anchor():
    base = GeometryConfig.from_transmissivity(0.7, h_C=0.0, gamma=1e-3)
    df = sweep_fig5(base, [0.0], [1.05])
    assert list(df.columns) == FIG5_COLUMNS
    row = df.iloc[0]
    assert row.two_r_distributed == pytest.approx(1.3251, abs=2e-4)
    assert row.d_opt == pytest.approx(3.1, abs=0.1)

    resource = distribute_resource(SourceSpec(1.05), row.x_C)
    channel = ChannelSpec.quantum_limited_attenuator(base.x_AB)
    grid = np.linspace(1 / base.x_AB, 100.0, 99001)
    values = [added_noise(resource, channel, 1.0, d) for d in grid]
    assert row.d_opt == pytest.approx(grid[int(np.argmin(values))], abs=2e-3)


def test_sweep_fig5_shape():
    base = GeometryConfig.from_transmissivity(0.7, h_C=0.0, gamma=1e-3)
    heights = [0.0, 200.0, 500.0, 1000.0, 3000.0]
    df = sweep_fig5(base, heights[::-1], [1.5, 0.5, 1.05])
    assert list(df.h_C) == sorted(heights * 3)
    assert list(df.r_C[:3]) == [0.5, 1.05, 1.5]
    assert (df.F_an >= df.F_qt - 1e-12).all()
    assert np.allclose(df.F_ef, df.F_ef.iloc[0])
    for _, group in df.groupby("r_C"):
        f_an = group.sort_values("h_C").F_an.to_numpy()
        assert np.all(np.diff(f_an) <= 1e-10)


def test_sweep_fig5_far_source_merges_with_direct_transmission():
    base = GeometryConfig.from_transmissivity(0.7, h_C=0.0, gamma=1e-3)
    row = sweep_fig5(base, [1e5], [1.05]).iloc[0]
    assert row.x_C < 1e-9
    assert row.F_an == pytest.approx(row.F_ef, abs=1e-6)


def test_sweep_fig5_executor_keeps_order():
    base = GeometryConfig.from_transmissivity(0.7, h_C=0.0, gamma=1e-3)
    heights = [0.0, 400.0, 800.0]
    serial = sweep_fig5(base, heights, [1.05, 0.7])
    with ThreadPoolExecutor(max_workers=3) as executor:
        parallel = sweep_fig5(base, heights, [1.05, 0.7], executor=executor)
    pd.testing.assert_frame_equal(serial, parallel)
