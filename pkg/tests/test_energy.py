import pytest

from lowres_mimo.energy import (PowerModel, adc_power, effective_rate, energy_efficiency, flops_channel_estimation,
                                flops_filter, flops_per_symbol, total_power)
from lowres_mimo.errors import ConfigurationError

PM = PowerModel()


def test_adc_power_example():
    assert adc_power(5, PM) == pytest.approx(9.6e-6)
    with pytest.raises(ConfigurationError):
        adc_power(0, PM)


def test_effective_rate_example():
    # 0.4 * (1 - 10 / 720) * 20 MHz * 5 bit/s/Hz
    assert effective_rate(5.0, 10, PM) == pytest.approx(3.944e7, rel=1e-3)


def test_overhead_bounds():
    with pytest.raises(ConfigurationError):
        effective_rate(1.0, 720, PM)
    assert effective_rate(1.0, 0, PM) == pytest.approx(0.4 * 20e6)


def test_flop_counts():
    assert flops_channel_estimation(200, 10, 10) == 42200
    assert flops_per_symbol(200, 10) == 3990
    assert flops_filter(200, 10, "mrc") == 0
    assert flops_filter(200, 10, "zf") == pytest.approx(1000 / 3 + 60000 + 2000 - 10 / 3)
    with pytest.raises(ConfigurationError):
        flops_filter(200, 10, "mmse")


def test_total_power_by_hand():
    m, k, l, b = 100, 10, 10, 4
    p_ce = 20e6 / 1800 * flops_channel_estimation(m, k, l) / 12.8e9
    p_sd = 20e6 * 0.4 * (1 - l / 720) * flops_per_symbol(m, k) / 12.8e9
    expect = m * (1.0 + 2 * 15e-15 * 20e6 * 16) + k * 0.3 + 2.0 + 18.0 + 0.1 + p_ce + p_sd
    assert total_power(m, k, l, b, "mrc", PM) == pytest.approx(expect)
    assert total_power(m, k, l, b, "zf", PM) > total_power(m, k, l, b, "mrc", PM)


def test_total_power_monotone():
    assert total_power(100, 10, 10, 6, "zf", PM) > total_power(100, 10, 10, 5, "zf", PM)
    assert total_power(120, 10, 10, 5, "zf", PM) > total_power(100, 10, 10, 5, "zf", PM)
    with pytest.raises(ConfigurationError):
        total_power(0, 10, 10, 5, "zf", PM)


def test_energy_efficiency():
    assert energy_efficiency([1e6, 2e6], 10.0) == pytest.approx(3e5)
    with pytest.raises(ValueError):
        energy_efficiency([1.0], 0.0)


def test_power_model_validation_and_json():
    assert PowerModel.from_json(PM.to_json()) == PM
    with pytest.raises(ConfigurationError):
        PowerModel(ul_ratio=1.5)
    with pytest.raises(ConfigurationError):
        PowerModel(p_bs=-1.0)
    with pytest.raises(ConfigurationError):
        PowerModel.from_json({"watts": 3})
