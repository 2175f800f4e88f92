"""Integration tests for the experiment runner, report writer and CLI."""
