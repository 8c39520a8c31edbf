"""Shared helpers for the :mod:`bpcfl` tests."""
from functools import wraps

import mock
import numpy as np
import unittest


class Test(unittest.TestCase):
    """Test case with mock patching and numpy array assertions."""

    def patch(self, *args, **kwargs):
        """Start :func:`mock.patch` and stop it when the test ends.

        Returns
        -------
            The mock that replaces the patched object.
        """
        patcher = mock.patch(*args, **kwargs)
        replacement = patcher.start()
        self.addCleanup(patcher.stop)
        return replacement

    @wraps(np.testing.assert_array_equal)
    def assertArrayEqual(self, a, b, err_msg='', verbose=True):
        np.testing.assert_array_equal(a, b, err_msg=err_msg, verbose=verbose)

    @wraps(np.testing.assert_array_almost_equal)
    def assertArrayAlmostEqual(self, a, b, decimal=6, err_msg='',
                               verbose=True):
        np.testing.assert_array_almost_equal(
            a, b, decimal=decimal, err_msg=err_msg, verbose=verbose)

    @wraps(np.testing.assert_allclose)
    def assertArrayAllClose(self, a, b, rtol=1e-7, atol=0., err_msg=''):
        np.testing.assert_allclose(a, b, rtol=rtol, atol=atol,
                                   err_msg=err_msg)


def finite_difference(func, point, step=1e-6):
    """Central difference gradient of a scalar function of an array."""
    point = np.array(point, dtype=np.float64)
    grad = np.zeros_like(point)
    for index in np.ndindex(point.shape):
        shift = np.zeros_like(point)
        shift[index] = step
        grad[index] = (func(point + shift) - func(point - shift)) / (2 * step)
    return grad
