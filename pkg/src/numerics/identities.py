"""Monte-Carlo checks of the Gaussian moment identities behind the estimator.

For u ~ N(0, I_{nd}) split into n blocks of size d and P_j the projector onto
block j:

    key1  E[<a,u><b,u> |u^j|^2]       = a^T (d I + 2 P_j) b
    key2  E[<a,u><b,u> (|u^j|^2 - d)] = 2 a^T P_j b
    key3  E[<b,u>^2 (|u^j|^2 - d)]     = 2 |P_j b|^2
    key4  E[<q,u> u^i]                 = q^i
"""

from dataclasses import dataclass

import numpy as np

from ..core.exceptions import DimensionMismatchError
from .linalg import DenseVector, as_vector
from .random import RngStream

CHUNK = 100_000


@dataclass(frozen=True)
class IdentityEstimate:
    """Monte-Carlo estimate of one identity next to its closed form."""

    name: str
    estimate: DenseVector
    closed_form: DenseVector
    stderr: DenseVector

    def z_scores(self) -> DenseVector:
        """Per-component |estimate - closed form| in units of stderr."""
        err = np.abs(self.estimate - self.closed_form)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(self.stderr > 0, err / self.stderr, np.where(err > 0, np.inf, 0.0))
        return z

    def within(self, bands: float) -> bool:
        """True when every component lies inside ``bands`` standard errors."""
        return bool(np.all(self.z_scores() <= bands))


def _block(j: int, d: int) -> slice:
    return slice(j * d, (j + 1) * d)


def gaussian_identity_check(
    a: DenseVector,
    b: DenseVector,
    block_j: int,
    d: int,
    n: int,
    samples: int,
    rng: RngStream,
    q: DenseVector | None = None,
    block_i: int | None = None,
) -> list[IdentityEstimate]:
    """Estimate the four moment identities and their closed forms.

    Args:
        a: Vector of length n*d.
        b: Vector of length n*d.
        block_j: Block index j (0-based) used by key1..key3.
        d: Block size.
        n: Number of blocks.
        samples: Number of Gaussian draws.
        rng: Stream the draws come from.
        q: Vector for key4 (defaults to ``a``).
        block_i: Block index for key4 (defaults to ``block_j``).

    Returns:
        One IdentityEstimate per identity, in key order.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    q = a if q is None else as_vector(q, "q")
    block_i = block_j if block_i is None else block_i
    dim = n * d
    for name, vec in (("a", a), ("b", b), ("q", q)):
        if vec.shape[0] != dim:
            raise DimensionMismatchError("gaussian_identity_check", f"{name} of length {dim}", vec.shape[0])
    if not (0 <= block_j < n and 0 <= block_i < n):
        raise DimensionMismatchError("gaussian_identity_check", f"block index in [0, {n})", (block_j, block_i))

    bj = _block(block_j, d)
    bi = _block(block_i, d)

    # Running sums of values and squared values for each identity
    sums = [np.zeros(1), np.zeros(1), np.zeros(1), np.zeros(d)]
    squares = [np.zeros(1), np.zeros(1), np.zeros(1), np.zeros(d)]

    remaining = samples
    while remaining > 0:
        size = min(CHUNK, remaining)
        u = rng.standard_normal((size, dim))
        au = u @ a
        bu = u @ b
        qu = u @ q
        norm_j = np.einsum("ij,ij->i", u[:, bj], u[:, bj])
        values = [
            (au * bu * norm_j)[:, None],
            (au * bu * (norm_j - d))[:, None],
            (bu**2 * (norm_j - d))[:, None],
            qu[:, None] * u[:, bi],
        ]
        for k, v in enumerate(values):
            sums[k] += v.sum(axis=0)
            squares[k] += (v**2).sum(axis=0)
        remaining -= size

    closed = [
        np.array([d * float(a @ b) + 2.0 * float(a[bj] @ b[bj])]),
        np.array([2.0 * float(a[bj] @ b[bj])]),
        np.array([2.0 * float(b[bj] @ b[bj])]),
        q[bi].copy(),
    ]

    results = []
    for k, name in enumerate(("key1", "key2", "key3", "key4")):
        mean = sums[k] / samples
        var = np.maximum(squares[k] / samples - mean**2, 0.0)
        stderr = np.sqrt(var * samples / max(samples - 1, 1) / samples)
        results.append(IdentityEstimate(name, mean, closed[k], stderr))
    return results
