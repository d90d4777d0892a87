import logging

from .settings import settings
logging.basicConfig(level=logging.getLevelName(settings.log_level))

__version__ = '1.0.0'

from .errors import (SgpError, DomainError, ConfigError, ConditioningError, NumericError, AccuracyError,
	ModelError, ParseError, ResultsIOError)

from .sgp import SgpParams, BoundaryBasis, covariance, covariance_matrix, correlation, psd
from .sgp import LocationGrid, StateSpaceChain, assemble_precision, sample_paths, condition_gaussian
from .sgp import ExponentialPrior, PsdPrior, to_sigma_rate, median_psd

from .fem import Family, KnotGrid, BasisSet, build_basis, assemble_T, correlation_error_curve

from .inference import ModelSpec, ComponentSpec, GridAxis, fit, forecast, excess_summary, sample_eta
