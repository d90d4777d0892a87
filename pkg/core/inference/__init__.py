from .model import ModelSpec, ComponentSpec, GridAxis, GridNode, Representation
from .fit import (fit, forecast, excess_summary, sample_eta, PosteriorResult, ForecastTable,
	normalize_weights, axis_marginals)
from .synthetic import simulate_dataset, SyntheticData
