"""karex: idempotent completions of n-exangulated categories, verified at desk scale."""

__version__ = "0.1.0"
