"""Lower central series of free associative algebras."""

__version__ = "0.1.0"
