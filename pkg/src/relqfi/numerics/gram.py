"""Modified Gram-Schmidt under a caller-supplied inner product."""
import numpy as np

from ..errors import DegenerateInput


def orthonormalize(vectors, inner_product, rank_tol=1e-10):
    """Orthonormalise ``vectors`` with respect to ``inner_product(v, w)``.

    ``inner_product`` must be conjugate-linear in its first argument. Each
    input is projected against the growing basis twice (modified Gram-Schmidt
    plus one reorthogonalisation pass); inputs whose residual norm falls below
    ``rank_tol`` times the largest input norm are dropped.

    Returns ``(basis, coefficients)`` with ``coefficients`` of shape
    ``(len(basis), len(vectors))`` such that
    ``vectors[k] ~= sum_b coefficients[b, k] * basis[b]``.
    """
    vectors = list(vectors)
    norms = [np.sqrt(max(inner_product(v, v).real, 0.0)) for v in vectors]
    largest = max(norms, default=0.0)
    if largest == 0.0:
        raise DegenerateInput("all input vectors have zero norm")
    cutoff = rank_tol * largest

    basis = []
    coeff_cols = []
    for v in vectors:
        r = v
        c = np.zeros(len(basis), dtype=complex)
        for _ in range(2):
            for b_idx, b in enumerate(basis):
                proj = inner_product(b, r)
                r = r - proj * b
                c[b_idx] += proj
        rnorm = np.sqrt(max(inner_product(r, r).real, 0.0))
        if rnorm > cutoff:
            basis.append(r / rnorm)
            c = np.append(c, rnorm)
        coeff_cols.append(c)

    coefficients = np.zeros((len(basis), len(vectors)), dtype=complex)
    for k, c in enumerate(coeff_cols):
        coefficients[: len(c), k] = c
    if len(basis) == 0:
        raise DegenerateInput("every input fell below the rank tolerance")
    return basis, coefficients
