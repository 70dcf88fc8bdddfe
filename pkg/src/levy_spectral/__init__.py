"""Spectral theory of symmetric Lévy processes killed on hitting the origin.

Phase shifts, generalised eigenfunctions, killed transition densities,
hitting-time laws and the associated spectral transforms, computed by
numerical quadrature for a handful of exponent families.
"""

from .eigenfunctions import (EigenData, EigenfunctionProfile, Method, compute_eigendata,
                             eigenfunction_values, eval_F, eval_G, eval_G_laplace, g_integral,
                             g_symbol, l_ratio, laplace_F, weighted_k)
from .exceptions import (AccuracyError, AssumptionError, CapabilityError, DomainError,
                         LevySpectralError, PositivityError)
from .exponents import (AssumptionReport, BrownianPlusPoisson, BrownianPlusStable, LevyExponent,
                        Relativistic, Stable, TruncatedStable, check_assumptions, parse_family,
                        psi, psi_inverse, psi_plus_imag_axis, psi_prime, psi_second)
from .grids import GridFunction, RealGrid
from .kernels import (AssumptionWarning, KernelGrid, ResolventSet, capital_phi, free_density,
                      hitting_prob_finite, hitting_tail, kernel_grid, killed_apply, killed_density,
                      laplace_hitting, phi, phi_plus_boundary, phi_tilde, phi_two, phi_xi,
                      resolvent_u)
from .quadrature import (DEFAULT_CONFIG, QuadratureConfig, cosine_transform, folded_pv,
                         fourier_cosine_inverse, improper_integral, laplace_transform,
                         pv_psi_integral)
from .spectral import (TransformPair, pi_even, pi_odd, pi_star, pi_transform, verify_diagonalization,
                       verify_parseval)

__version__ = "0.1.0"
