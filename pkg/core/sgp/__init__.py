from .kernel import (SgpParams, BoundaryBasis, covariance, covariance_matrix, correlation, psd,
	half_sine_gap, apply_operator, MIN_ALPHA)
from .statespace import (LocationGrid, StateSpaceChain, AugmentedPrecision, transition, noise_covariance,
	assemble_precision, marginal_covariances, sample_paths, condition_gaussian, log_determinant)
from .prior import (ExponentialPrior, PsdPrior, to_sigma_rate, median_psd, sigma_to_psd, psd_to_sigma,
	quantile_grid)
