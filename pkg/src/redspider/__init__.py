"""Green-red chase laboratory: spiders, swarms, green graphs and rainworms."""

__version__ = "0.1.0"
