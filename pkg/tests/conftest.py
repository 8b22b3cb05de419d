#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Fixtures partagées par les tests.
"""

import numpy as np
import pytest

from src.catalog import eq9, ghz, w
from src.multistate import pure_to_density


@pytest.fixture
def rng():
    """Générateur pseudo-aléatoire à graine fixe."""
    return np.random.default_rng(20240501)


@pytest.fixture
def ghz_rho():
    return pure_to_density(ghz(3))


@pytest.fixture
def w_rho():
    return pure_to_density(w(3))


@pytest.fixture
def eq9_rho():
    return pure_to_density(eq9(0.5))
