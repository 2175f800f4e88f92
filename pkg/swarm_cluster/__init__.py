"""Canonical PSO based K-means, baseline clusterers, validity indices and a benchmark harness."""

__version__ = "0.1.0"
