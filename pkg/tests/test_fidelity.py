import math

import numpy as np
import pytest

from cv_htdt.errors import PhysicalityError, ValidationError
from cv_htdt.fidelity import (
    FIG3_COLUMNS,
    NO_CLONING_THRESHOLD,
    CodebookSpec,
    avg_fidelity,
    ef_beats_teleportation,
    fidelity_an,
    fidelity_ef,
    fidelity_from_noise,
    fidelity_qt,
    fig3_table,
    infidelity_ratio,
    no_cloning_entanglement,
    no_cloning_entanglement_numeric,
    optimized_fidelity,
)
from cv_htdt.gaussian import ChannelSpec, ResourceTriplet
from cv_htdt.protocol import noise_ef

R_LN2 = math.log(2) / 2


def test_avg_fidelity():
    for lam in (0.0, 0.5, 3.0):
        assert avg_fidelity(1.0, 0.0, CodebookSpec(lam)) == pytest.approx(1.0)
    assert avg_fidelity(1.0, 1.0) == pytest.approx(2 / 3)
    assert avg_fidelity(1.5, 1.0) == 0.0
    assert avg_fidelity(1.5, 1.0, CodebookSpec(2.0)) > 0
    with pytest.raises(PhysicalityError, match=r"G >= \|1 - g\|"):
        avg_fidelity(2.0, 0.5)
    with pytest.raises(ValidationError):
        CodebookSpec(-1.0)


def test_gaussian_codebook_approaches_uniform_limit():
    assert avg_fidelity(1.0, 0.8, CodebookSpec(1e-9)) == pytest.approx(fidelity_from_noise(0.8), rel=1e-9)
    assert avg_fidelity(1.2, 0.8, CodebookSpec(1e-9)) < 1e-6


def test_fidelity_qt():
    assert fidelity_qt(0.0) == 0.5
    assert fidelity_qt(R_LN2) == pytest.approx(NO_CLONING_THRESHOLD, abs=1e-15)
    assert fidelity_qt(50.0) == pytest.approx(1.0)


def test_fidelity_an_anchors():
    assert fidelity_an(R_LN2, 1 / 3) == pytest.approx(2 / 3, abs=1e-9)
    assert fidelity_an(R_LN2, 2 / 3) == pytest.approx(0.761905, abs=1e-5)
    for r in (0.1, 0.5, 1.0):
        assert fidelity_an(r, 1.0) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        fidelity_an(R_LN2, 0.0)
    with pytest.raises(ValidationError):
        fidelity_an(R_LN2, 1.2)


def test_fidelity_ef():
    assert fidelity_ef(1.0) == 1.0
    assert fidelity_ef(0.5) == pytest.approx(2 / 3)
    assert fidelity_ef(1e-12) == pytest.approx(0.5)
    x = 0.3
    G = noise_ef(ChannelSpec.quantum_limited_attenuator(x), 1.0, 1 / x)
    assert fidelity_from_noise(G) == pytest.approx(fidelity_ef(x))


def test_fidelity_an_dominates_baselines():
    for r in np.linspace(0.05, 1.5, 15):
        for x in np.linspace(0.01, 1.0, 40):
            assert fidelity_an(r, x) >= max(fidelity_qt(r), fidelity_ef(x)) - 1e-10


def test_fidelity_an_continuous_at_crossover(rng):
    for r in rng.uniform(0.05, 2.0, size=20):
        t = math.tanh(r)
        assert fidelity_an(r, t + 1e-12) == pytest.approx(fidelity_an(r, t), abs=1e-9)


def test_pipeline_matches_closed_form():
    for r in (0.2, R_LN2, 0.6):
        resource = ResourceTriplet.two_mode_squeezed_vacuum(r)
        for x in np.linspace(0.1, 0.95, 18):
            numeric = optimized_fidelity(resource, ChannelSpec.quantum_limited_attenuator(x), d_max=1e9)
            assert numeric == pytest.approx(fidelity_an(r, x), abs=1e-6), (r, x)


def test_infidelity_ratio():
    r = 0.4
    delta_qt, delta_an = infidelity_ratio(r, math.tanh(r))
    assert delta_qt == delta_an
    _, delta_an = infidelity_ratio(R_LN2, 2 / 3)
    assert delta_an == pytest.approx(1.05, abs=1e-9)
    for x in np.linspace(0.02, 0.98, 30):
        assert infidelity_ratio(R_LN2, x)[1] >= 1 - 1e-12
    with pytest.raises(ValidationError, match="perfect"):
        infidelity_ratio(R_LN2, 1.0)


def test_ef_beats_teleportation():
    assert ef_beats_teleportation(R_LN2, 0.6)
    assert not ef_beats_teleportation(R_LN2, 0.4)
    assert ef_beats_teleportation(R_LN2, 0.6) == (fidelity_ef(0.6) > fidelity_qt(R_LN2))


def test_no_cloning_entanglement():
    assert no_cloning_entanglement(0.2) == pytest.approx(math.log(2))
    assert no_cloning_entanglement(0.4) == pytest.approx(0.655, abs=1e-3)
    assert no_cloning_entanglement(0.5) == 0.0
    assert no_cloning_entanglement(1 / 3 + 1e-9) == pytest.approx(math.log(2), abs=1e-6)
    assert no_cloning_entanglement(0.5 - 1e-9) == pytest.approx(0.0, abs=1e-3)
    xs = np.linspace(0.01, 1.0, 200)
    values = [no_cloning_entanglement(x) for x in xs]
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_no_cloning_entanglement_root_finding():
    for x in np.linspace(0.34, 0.49, 16):
        assert no_cloning_entanglement_numeric(x) == pytest.approx(no_cloning_entanglement(x), abs=1e-8)
    assert no_cloning_entanglement_numeric(0.7) == 0.0


def test_fig3_table():
    xs = np.linspace(1 / 30, 29 / 30, 29)
    df = fig3_table(R_LN2, xs)
    assert list(df.columns) == FIG3_COLUMNS
    assert len(df) == 29
    row = df[np.isclose(df.x, 2 / 3)].iloc[0]
    assert row.F_an == pytest.approx(0.761905, abs=1e-5)
    assert row.d_opt == pytest.approx(5 / 3, rel=1e-6)
    row = df[np.isclose(df.x, 1 / 3)].iloc[0]
    assert row.F_an == pytest.approx(2 / 3, abs=1e-9)
    assert row.F_qt == pytest.approx(2 / 3, abs=1e-9)
    row = df[np.isclose(df.x, 0.2)].iloc[0]
    assert row.r_nc == pytest.approx(0.6931, abs=1e-4)
    with pytest.raises(ValidationError):
        fig3_table(0.0, xs)
