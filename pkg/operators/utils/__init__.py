from .base_command import (BaseCommand, positive_float, nonneg_float, nonneg_int, add_frequency_arguments,
	frequency, OUTPUT_DIR_ENV, EXIT_OK)
