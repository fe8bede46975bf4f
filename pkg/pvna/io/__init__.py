"""
File formats: Touchstone S-parameters, error-terms files and instrument configuration.
"""

from .touchstone import parse_touchstone, write_touchstone
from .calfile import read_error_terms, write_error_terms
from .config import RunConfig, load_config, load_kit
