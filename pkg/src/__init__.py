"""Cross terms, response rates and entanglement of uniformly accelerated detector pairs."""

__version__ = "1.0.0"
