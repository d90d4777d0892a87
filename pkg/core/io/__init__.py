from .dataset import Dataset, load_dataset
from .config import ModelConfig, load_config, parse_config, validate_config, build_spec, expand_values
from .results import write_results, write_table, fit_table, hyper_table, summary
