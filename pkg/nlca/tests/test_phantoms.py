import unittest

import numpy as np

from nlca.errors import ParameterError
from nlca.phantoms import TISSUE_INTENSITIES, boundary_slab_mask, brain_phantom, two_region_phantom


class TwoRegionPhantomTestCase(unittest.TestCase):

    def test_halves(self):
        volume = two_region_phantom((16, 4, 4))
        self.assertTrue(np.all(volume.data[:8] == 10.0))
        self.assertTrue(np.all(volume.data[8:] == 100.0))

    def test_other_axis(self):
        volume = two_region_phantom((4, 4, 5), low=1.0, high=2.0, axis=2)
        self.assertEqual([1.0, 1.0, 2.0, 2.0, 2.0], volume.data[0, 0].tolist())

    def test_boundary_slab_straddles_the_split(self):
        mask = boundary_slab_mask((16, 4, 4), thickness=2)
        self.assertEqual([7, 8], sorted(set(np.nonzero(mask)[0].tolist())))
        self.assertEqual(2 * 4 * 4, int(mask.sum()))


class BrainPhantomTestCase(unittest.TestCase):

    @staticmethod
    def get_sut(modality="T1w", seed=0):
        return brain_phantom((32, 32, 32), modality=modality, seed=seed)

    def test_values_are_tissue_levels_within_eight_bits(self):
        for modality, levels in TISSUE_INTENSITIES.items():
            values = set(np.unique(self.get_sut(modality).data).tolist())
            self.assertTrue(values <= set(levels.values()), modality)
            self.assertTrue(0 <= min(values) and max(values) <= 255)

    def test_background_corner_is_zero(self):
        self.assertEqual(0.0, float(self.get_sut().data[0, 0, 0]))

    def test_several_tissues_present(self):
        self.assertGreaterEqual(len(np.unique(self.get_sut().data)), 5)

    def test_seed_moves_detail_structures_only(self):
        first, second = self.get_sut(seed=0), self.get_sut(seed=1)
        np.testing.assert_array_equal(first.data, self.get_sut(seed=0).data)
        self.assertFalse(np.array_equal(first.data, second.data))

    def test_unknown_modality_is_rejected(self):
        with self.assertRaises(ParameterError):
            self.get_sut("FLAIR")
