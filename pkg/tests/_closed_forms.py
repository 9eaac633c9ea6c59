"""Closed forms used only as independent test oracles."""

import numpy as np
from scipy.special import gammaln, hyp2f1


def h_closed_form(k: int, t: float) -> float:
    """Expected inner product of sphere projections of t-correlated Gaussians in R^k."""
    c = np.exp(2 * (gammaln((k + 1) / 2) - gammaln(k / 2)))
    return float((2 / k) * c * t * hyp2f1(0.5, 0.5, k / 2 + 1, t * t))
