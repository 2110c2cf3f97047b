"""False discovery rate procedures for directional two-tailed testing."""

__version__ = "0.1.0"
