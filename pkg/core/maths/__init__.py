from .banded import BandedCholesky, bandwidth, bandwidth_ordering, selected_inverse
