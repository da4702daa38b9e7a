"""Cosine and sine transforms on Grassmannians via BC-type Jacobi analysis."""

from .rootsystem import RootSystemBC, grassmannian_preset, rho, root_system
from .jacobi import jacobi_polynomial, value_at_half_pi
from .spectra import cosine_symbol, sine_symbol, knapp_stein_symbol

__version__ = "0.1.0"
