"""Performance tests for the clustering comparisons."""
