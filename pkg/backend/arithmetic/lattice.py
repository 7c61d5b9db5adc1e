"""Short vector search in ideal lattices of M_q under a weighted trace form.

The basis stays exact (Python ints); only Gram-Schmidt data is floating point.
Every candidate is re-checked exactly by the caller.
"""
from typing import List, Sequence, Tuple
import logging
import math

import numpy as np

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def weighted_metric(q: int, t: float) -> np.ndarray:
    """Rows map basis coordinates to R^4 so that |c @ M|^2 = 2t|phi1|^2 + (2/t)|phi2|^2"""
    root = math.sqrt(q)
    images = []
    for w in (complex(0.5, root / 2), complex(0.5, -root / 2)):
        images.append([1, 1j, w, 1j * w])
    s1 = math.sqrt(2 * t)
    s2 = math.sqrt(2 / t)
    rows = []
    for j in range(4):
        z1, z2 = images[0][j], images[1][j]
        rows.append([s1 * z1.real, s1 * z1.imag, s2 * z2.real, s2 * z2.imag])
    return np.array(rows, dtype=float)


def weight_grid(ratio: float) -> List[float]:
    """Geometric grid of weights with consecutive ratio at most 2 spanning one unit step"""
    span = abs(math.log(ratio))
    steps = max(1, math.ceil(span / math.log(2)))
    return [math.exp(j * span / steps) for j in range(steps)]


def _gram_schmidt(rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n = rows.shape[0]
    star = np.zeros_like(rows)
    mu = np.zeros((n, n))
    norms = np.zeros(n)
    for i in range(n):
        star[i] = rows[i]
        for j in range(i):
            mu[i, j] = rows[i] @ star[j] / norms[j]
            star[i] = star[i] - mu[i, j] * star[j]
        norms[i] = star[i] @ star[i]
    return norms, mu


def lll_reduce(basis: Sequence[Sequence[int]], metric: np.ndarray, delta: float = 0.99) -> List[List[int]]:
    b = [[int(x) for x in v] for v in basis]
    n = len(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            _, mu = _gram_schmidt(np.array(b, dtype=float) @ metric)
            c = int(round(mu[k, j]))
            if c:
                b[k] = [x - c * y for x, y in zip(b[k], b[j])]
        norms, mu = _gram_schmidt(np.array(b, dtype=float) @ metric)
        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            k = max(k - 1, 1)
    return b


def short_vectors(basis: Sequence[Sequence[int]], metric: np.ndarray, bound: float) -> List[Tuple[float, Vector]]:
    """All nonzero lattice vectors with weighted length at most bound, shortest first.

    Fincke-Pohst enumeration from the Cholesky factor of the Gram matrix.
    """
    b = [[int(x) for x in v] for v in basis]
    rows = np.array(basis, dtype=float) @ metric
    gram = rows @ rows.T
    r = np.linalg.cholesky(gram).T
    n = len(basis)
    limit = bound * (1 + 1e-9)
    coeffs = [0] * n
    found = []

    def descend(i: int, remaining: float):
        centre = -sum(r[i, j] * coeffs[j] for j in range(i + 1, n)) / r[i, i]
        radius = math.sqrt(max(remaining, 0.0)) / r[i, i]
        for x in range(math.ceil(centre - radius), math.floor(centre + radius) + 1):
            used = (r[i, i] * (x - centre)) ** 2
            if used > remaining:
                continue
            coeffs[i] = x
            if i == 0:
                if any(coeffs):
                    vec = tuple(sum(c * b[j][m] for j, c in enumerate(coeffs)) for m in range(len(b[0])))
                    length = float(np.sum((np.array(vec, dtype=float) @ metric) ** 2))
                    found.append((length, vec))
            else:
                descend(i - 1, remaining - used)
        coeffs[i] = 0

    descend(n - 1, limit)
    found.sort()
    logger.debug(f"Enumerated {len(found)} vectors below {bound:.1f}")
    return found
