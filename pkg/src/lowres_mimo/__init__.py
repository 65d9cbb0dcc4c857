"""Uplink massive MIMO with low-resolution ADCs over Rician fading.

Link-level simulation, large-system SINR approximations, energy-efficiency
model and a seeded Monte-Carlo harness.
"""

from .asymptotics import (ScalingScenario, SigmaMatrix, moment_cross, moment_h2, moment_h4, mrc_sinr_approx,
                          power_scaling_limit, sigma_imperfect, sigma_perfect, strong_los_limit, zf_sinr_approx)
from .channel import (ChannelRealization, RicianProfile, default_beta, default_profile, los_gram, los_inner_lambda,
                      los_matrix, sample_channel, steering_vector)
from .energy import PowerModel, adc_power, effective_rate, energy_efficiency, total_power
from .errors import ConfigurationError, NumericalRankError, ValidationFailure
from .estimation import (EstimationStats, PilotConfig, estimate_channel_explicit, estimation_quality,
                         sample_estimated_channel)
from .quantization import AdcModel, alpha_for_bits, aqnm_quantize, lloyd_max, quantization_noise_cov
from .receivers import SinrBreakdown, se_from_sinr, sinr_all, sinr_imperfect, sinr_perfect

__version__ = "0.1.0"
