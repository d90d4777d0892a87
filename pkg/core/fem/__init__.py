from .basis import Family, KnotGrid, BasisSet, build_basis, origin_reduction
from .assembly import (WeightLaw, assemble_gcm, assemble_T, approx_covariance, approx_correlation,
	reduced_design, quadrature_points)
from .diagnostics import correlation_error_curve, max_correlation_error, basis_count
