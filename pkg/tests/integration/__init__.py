"""Integration tests for the GNE solvers.

Statistical acceptance runs over the bundled games: estimator unbiasedness,
convergence rate, Gaussian identities, worker-pool reproducibility.

Run with: uv run pytest tests/integration/ -v -m integration
"""
