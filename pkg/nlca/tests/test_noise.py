import math
import unittest

import numpy as np
import pytest

from nlca.errors import ParameterError
from nlca.noise import NoiseModel, add_rician, dwt_hhh, estimate_noise, percent_to_sigma
from nlca.phantoms import brain_phantom
from nlca.volume import Volume3D


def _constant(value, dims):
    return Volume3D(np.full(dims, value, dtype=np.float32))


class AddRicianTestCase(unittest.TestCase):

    @staticmethod
    def get_sut(volume, sigma_n, seed=0, workers=1):
        return add_rician(volume, NoiseModel(sigma_n=sigma_n, seed=seed), workers=workers)

    def test_zero_sigma_is_identity(self):
        volume = Volume3D(np.random.default_rng(0).random((6, 5, 4)) * 200)
        noisy = self.get_sut(volume, 0.0)
        np.testing.assert_array_equal(volume.data, noisy.data)

    def test_rayleigh_mean_on_zero_signal(self):
        noisy = self.get_sut(_constant(0.0, (100, 100, 100)), 1.0, seed=11)
        self.assertAlmostEqual(math.sqrt(math.pi / 2.0), float(noisy.data.mean(dtype=np.float64)),
                               delta=0.01 * math.sqrt(math.pi / 2.0))

    def test_second_moment_identity(self):
        noisy = self.get_sut(_constant(100.0, (100, 100, 100)), 10.0, seed=5)
        second_moment = float(np.mean(noisy.data.astype(np.float64) ** 2))
        self.assertAlmostEqual(10200.0, second_moment, delta=102.0)

    def test_output_is_non_negative(self):
        noisy = self.get_sut(_constant(1.0, (20, 20, 20)), 30.0)
        self.assertGreaterEqual(float(noisy.data.min()), 0.0)

    def test_same_seed_is_reproducible(self):
        volume = brain_phantom((24, 24, 24))
        np.testing.assert_array_equal(self.get_sut(volume, 12.0, seed=3).data,
                                      self.get_sut(volume, 12.0, seed=3).data)

    def test_different_seeds_differ(self):
        volume = _constant(50.0, (8, 8, 8))
        self.assertFalse(np.array_equal(self.get_sut(volume, 5.0, seed=1).data,
                                        self.get_sut(volume, 5.0, seed=2).data))

    def test_worker_count_does_not_change_output(self):
        # more voxels than one random stream chunk
        volume = _constant(80.0, (48, 48, 48))
        single = self.get_sut(volume, 8.0, seed=9, workers=1)
        pooled = self.get_sut(volume, 8.0, seed=9, workers=4)
        np.testing.assert_array_equal(single.data, pooled.data)

    def test_negative_input_is_rejected(self):
        with self.assertRaises(ParameterError):
            self.get_sut(_constant(-1.0, (2, 2, 2)), 1.0)

    def test_negative_sigma_is_rejected(self):
        with self.assertRaises(ParameterError):
            NoiseModel(sigma_n=-1.0)


class PercentToSigmaTestCase(unittest.TestCase):

    def test_ten_percent_of_eight_bit(self):
        self.assertAlmostEqual(25.5, percent_to_sigma(10))

    def test_out_of_range_percent_is_rejected(self):
        for percent in (0, -5, 100):
            with self.assertRaises(ParameterError):
                percent_to_sigma(percent)


class DwtHhhTestCase(unittest.TestCase):

    def test_constant_volume_has_zero_detail(self):
        hhh = dwt_hhh(_constant(42.0, (8, 6, 4)))
        np.testing.assert_allclose(hhh.data, 0.0, atol=1e-12)

    def test_single_impulse(self):
        data = np.zeros((2, 2, 2))
        data[0, 0, 0] = 1.0
        hhh = dwt_hhh(Volume3D(data))
        self.assertEqual((1, 1, 1), hhh.dims)
        self.assertAlmostEqual(0.5 ** 1.5, float(hhh.data[0, 0, 0]), places=12)

    def test_odd_dims_are_mirror_extended(self):
        self.assertEqual((3, 2, 2), dwt_hhh(_constant(1.0, (5, 4, 3))).dims)

    def test_single_voxel_axis_is_rejected(self):
        with self.assertRaises(ParameterError):
            dwt_hhh(_constant(1.0, (4, 1, 4)))

    def test_white_noise_variance_is_preserved(self):
        noise = np.random.default_rng(4).normal(0.0, 3.0, size=(128, 128, 128))
        hhh = dwt_hhh(Volume3D(noise))
        self.assertAlmostEqual(3.0, float(hhh.data.std()), delta=0.06)


class EstimateNoiseTestCase(unittest.TestCase):

    @staticmethod
    def get_sut(volume, **kwargs):
        return estimate_noise(volume, **kwargs)

    def test_constant_volume(self):
        estimate = self.get_sut(_constant(90.0, (16, 16, 16)))
        self.assertEqual(0.0, estimate.sigma_hat)
        self.assertEqual(0.0, estimate.sigma_n_hat)
        self.assertEqual(0, estimate.iterations)

    def test_high_snr_homogeneous_volume(self):
        noisy = add_rician(_constant(1000.0, (64, 64, 64)), NoiseModel(sigma_n=3.0, seed=1))
        estimate = self.get_sut(noisy)
        self.assertAlmostEqual(3.0, estimate.sigma_n_hat, delta=0.09)
        self.assertGreater(estimate.iterations, 0)

    def test_rician_correction_raises_estimate_above_magnitude_scale(self):
        noisy = add_rician(_constant(20.0, (48, 48, 48)), NoiseModel(sigma_n=10.0, seed=2))
        estimate = self.get_sut(noisy)
        self.assertGreater(estimate.sigma_n_hat, estimate.sigma_hat)

    def test_scale_consistency(self):
        volume = brain_phantom((32, 32, 32))
        base = self.get_sut(add_rician(volume, NoiseModel(sigma_n=10.0, seed=6)))
        scaled = self.get_sut(add_rician(volume.with_data(volume.data * 2.0), NoiseModel(sigma_n=20.0, seed=6)))
        self.assertAlmostEqual(2.0 * base.sigma_n_hat, scaled.sigma_n_hat, delta=0.02 * base.sigma_n_hat)

    def test_estimate_serialises_all_fields(self):
        estimate = self.get_sut(_constant(1.0, (4, 4, 4)))
        self.assertEqual({"sigma_hat", "theta_hat", "sigma_n_hat", "iterations"}, set(estimate.to_dict()))

    def test_theta_matches_returned_sigma(self):
        noisy = add_rician(brain_phantom((32, 32, 32)), NoiseModel(sigma_n=percent_to_sigma(20), seed=3))
        estimate = self.get_sut(noisy)
        data = noisy.data
        signal = float(data[data > data.mean(dtype=np.float64)].mean(dtype=np.float64))
        self.assertGreater(estimate.iterations, 1)
        self.assertEqual(pytest.approx(signal / estimate.sigma_n_hat, rel=1e-9), estimate.theta_hat)


@pytest.mark.slow
@pytest.mark.parametrize("percent", [5, 10, 15])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_estimate_on_brain_phantom_within_five_percent(percent, seed):
    sigma = percent_to_sigma(percent)
    noisy = add_rician(brain_phantom((64, 64, 64)), NoiseModel(sigma_n=sigma, seed=seed))
    assert estimate_noise(noisy).sigma_n_hat == pytest.approx(sigma, rel=0.05)
