"""Exact q-series tools for finding and checking Rogers-Ramanujan type identities."""

from .series import QSeries, SignedMonomial, mono
from .products import (apply_poch, apply_poch_infinite, classical_theta, false_theta_psi,
                       jtp_product, poch_finite, poch_infinite, theta_f)
from .prodmake import PeriodicProductForm, detect_period, prodmake, product_to_series
from .families import SeriesFamily, expand_family, is_sparse

__version__ = "0.1.0"
