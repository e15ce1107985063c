"""Unit tests for the GNE solvers.

Unit tests are fast and deterministic: small bundled games, fixed seeds,
no Monte-Carlo runs longer than a few seconds.

Run with: uv run pytest tests/unit/ -v
"""
