"""Cost-optimal national electricity mixes under policy scenarios."""

__version__ = "0.1.0"
