"""Level-1 sum-of-squares bounds and Gaussian rounding for quantum rotor models."""

from .instance import RotorInstance, load_instance, parse_instance
from .montecarlo import McConfig, McEstimate

__version__ = "0.1.0"

__all__ = ["RotorInstance", "load_instance", "parse_instance", "McConfig", "McEstimate", "__version__"]
