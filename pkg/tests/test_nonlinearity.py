import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlcharge.errors import InvalidParameter, InvalidSpectrum, UnknownModel
from nlcharge.nonlinearity import (
    MODEL_NAMES,
    NonlinearityModel,
    catalog,
    get_model,
    load_spectrum,
    model_barut_girardello,
    model_dual_harmonious,
    model_from_spectrum,
    model_gilmore_perelomov,
    model_harmonious,
    model_hydrogen,
    model_poschl_teller,
    model_q_deformed,
    model_unit,
)


def test_poschl_teller_values():
    m = model_poschl_teller(3)
    assert m.f(1) == pytest.approx(2.0)
    assert m.f(6) == pytest.approx(3.0)
    assert model_poschl_teller(2).f(0) == pytest.approx(math.sqrt(2))
    assert m.radius == math.inf
    with pytest.raises(InvalidParameter):
        model_poschl_teller(1.5)


def test_hydrogen_values():
    m = model_hydrogen()
    assert m.f(0) == pytest.approx(math.sqrt(2))
    assert m.f(1) == pytest.approx(math.sqrt(3) / 2)
    assert m.energy(2) == pytest.approx(8 / 9, rel=1e-15)
    assert m.radius == 1.0


def test_harmonious_pair():
    hs, dhs = model_harmonious(), model_dual_harmonious()
    assert hs.f(4) == pytest.approx(0.5)
    assert dhs.f(4) == pytest.approx(2.0)
    assert hs.radius == 1.0 and dhs.radius == math.inf
    lf = hs.log_factorial_f(300) + dhs.log_factorial_f(300)
    assert np.all(lf == 0.0)
    prod = np.exp(hs.log_factorial_f(50)) * np.exp(dhs.log_factorial_f(50))
    np.testing.assert_allclose(prod, 1.0, rtol=1e-13)


def test_bg_gp_pair():
    assert model_barut_girardello(0.5).f(3) == pytest.approx(math.sqrt(3))
    assert model_gilmore_perelomov(1).f(3) == pytest.approx(0.5)
    n = np.arange(1, 200)
    for kappa in (0.5, 1, 1.5, 4):
        bg, gp = model_barut_girardello(kappa), model_gilmore_perelomov(kappa)
        assert np.all(bg.log_f(n) + gp.log_f(n) == 0.0)
        np.testing.assert_allclose(bg.f(n) * gp.f(n), 1.0, rtol=1e-15)
    assert model_barut_girardello(0.5).radius == math.inf
    assert model_gilmore_perelomov(0.5).radius == 1.0


@pytest.mark.parametrize("kappa", [0, 0.25, 0.75, -1])
def test_bad_kappa(kappa):
    with pytest.raises(InvalidParameter):
        model_barut_girardello(kappa)
    with pytest.raises(InvalidParameter):
        model_gilmore_perelomov(kappa)


def test_q_deformed():
    assert np.all(model_q_deformed(1.0).f(np.arange(50)) == 1.0)
    m = model_q_deformed(0.5)
    assert m.f(0) == pytest.approx(1.0)
    assert m.f(1) == pytest.approx(math.sqrt((0.25 - 4.0) / (2 * (0.5 - 2.0))), rel=1e-14)
    n = np.arange(1, 60)
    np.testing.assert_allclose(np.exp(m.log_f(n)), m.f(n), rtol=1e-13)
    assert np.all(m.f(n) > 0)
    for bad in (0.0, 1.5, -0.2):
        with pytest.raises(InvalidParameter):
            model_q_deformed(bad)


def test_unit():
    m = model_unit()
    assert m.f(0) == 1 and m.f(100) == 1
    assert np.all(m.log_factorial_f(100) == 0.0)
    assert m.radius == math.inf


def test_energy_is_zero_at_vacuum():
    for m in catalog():
        assert m.energy(0) == 0.0


@pytest.mark.parametrize("model", catalog() + [model_q_deformed(0.7)], ids=lambda m: m.describe())
def test_spectrum_bridge_reproduces_model(model):
    n = np.arange(1, 101)
    bridged = model_from_spectrum(lambda k: k * model.f(k) ** 2, name="bridge")
    np.testing.assert_allclose(bridged.f(n), model.f(n), rtol=1e-14)


def test_spectrum_examples():
    n = np.arange(1, 50)
    assert np.allclose(model_from_spectrum(lambda k: k * 1.0).f(n), 1.0)
    pt = model_from_spectrum(lambda k: k * (k + 3.0))
    np.testing.assert_allclose(pt.f(n), model_poschl_teller(3).f(n), rtol=1e-14)
    h = model_from_spectrum(lambda k: 1 - 1 / (k + 1.0) ** 2)
    np.testing.assert_allclose(h.f(n), model_hydrogen().f(n), rtol=1e-14)
    assert h.radius == pytest.approx(1.0, rel=0.01)
    assert pt.radius == math.inf


def test_spectrum_f0_extension():
    assert model_from_spectrum(lambda k: k * (k + 3.0)).f(0) == pytest.approx(math.sqrt(3.0), rel=1e-6)
    assert model_from_spectrum(lambda k: np.ones(np.shape(k))).f(0) == 1.0


def test_spectrum_rejects_nonpositive():
    with pytest.raises(InvalidSpectrum):
        model_from_spectrum(lambda k: k - 3.0)
    with pytest.raises(InvalidSpectrum):
        model_from_spectrum([0.0] + [1.0] * 5)


def test_spectrum_table(tmp_path):
    path = tmp_path / "pt.txt"
    rows = "\n".join(f"{k} {k * (k + 3)}" for k in range(0, 260))
    path.write_text("# n e_n\n" + rows + "\n")
    m = load_spectrum(path)
    np.testing.assert_allclose(m.f(np.arange(1, 100)), model_poschl_teller(3).f(np.arange(1, 100)), rtol=1e-14)
    assert get_model("spectrum", file=str(path)).describe() == "pt"
    with pytest.raises(InvalidSpectrum):
        m.log_f(np.array([400]))


@pytest.mark.parametrize("model", catalog(), ids=lambda m: m.describe())
def test_declared_radius_matches_estimate(model):
    if math.isinf(model.radius):
        assert model.radius_estimate > 1e6
    else:
        assert model.radius_estimate == pytest.approx(model.radius, rel=0.01)


def test_radius_mismatch_is_logged(caplog):
    with caplog.at_level(logging.WARNING):
        NonlinearityModel("wrong", {}, lambda n: np.zeros(np.shape(n)), 1.0)
    assert "declared radius" in caplog.text


def test_zero_at_positive_integer_rejected():
    with pytest.raises(InvalidParameter):
        NonlinearityModel("bad", {}, lambda n: np.where(n == 5, -np.inf, 0.0), math.inf)


def test_registry():
    assert get_model("pt", nu=3).describe() == "poschl_teller(nu=3)"
    assert get_model("BG").describe() == "barut_girardello(kappa=0.5)"
    assert len(catalog()) == 7
    assert "spectrum" in MODEL_NAMES
    with pytest.raises(UnknownModel):
        get_model("nope")
    with pytest.raises(InvalidParameter):
        get_model("hydrogen", nu=3)
    with pytest.raises(InvalidParameter):
        get_model("spectrum")


@given(st.floats(2.0, 50.0), st.integers(1, 500))
def test_pt_energy_exact(nu, n):
    m = model_poschl_teller(nu)
    assert m.energy(n) == pytest.approx(n * m.f(n) ** 2, rel=1e-13)
