"""Pure-Python kernels, the fallback for the compiled extension.

Both backends implement the same two hot loops with identical semantics:

* ``jacobi_eigvals_hermitian`` -- cyclic Jacobi sweeps on a Hermitian
  matrix, deterministic row-major pivot order;
* ``count_words`` -- frequency counts of window words over a box of
  lattice shifts, with words encoded as base-``alphabet`` integers.
"""

import numpy as np

BACKEND = "python"


def jacobi_eigvals_hermitian(a, tol: float = 1e-14, max_sweeps: int = 60):
    """Eigenvalues of a Hermitian matrix, ascending.

    ``a`` is an (n, n) complex array; the caller is responsible for
    Hermitian symmetry.  Sweeps stop once the off-diagonal Frobenius mass
    drops below tol * ||a||_F.
    """
    a = np.array(a, dtype=np.complex128, order="C")
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("jacobi_eigvals_hermitian expects a square matrix")
    if n == 1:
        return np.array([a[0, 0].real])
    scale = np.sqrt((np.abs(a) ** 2).sum())
    if scale == 0.0:
        return np.zeros(n)
    threshold = tol * scale
    for _ in range(max_sweeps):
        off = np.sqrt(max((np.abs(a) ** 2).sum() - (np.abs(np.diag(a)) ** 2).sum(), 0.0))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= threshold / (n * n):
                    continue
                alpha = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns p, q of a @ J with J = [[c, s*conj(alpha)], [-s*alpha, c]]
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * alpha * col_q
                a[:, q] = s * np.conj(alpha) * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * np.conj(alpha) * row_q
                a[q, :] = s * alpha * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return np.sort(np.diag(a).real)


def count_words(values, region_shape, box_shape, window_offsets, alphabet: int):
    """Count window words over all box shifts.

    ``values``: flat int array of symbols over the padded region (row-major
    over ``region_shape``); the box cell ``g`` lives at region coordinate
    ``g`` (window offsets were already shifted to be nonnegative).
    Returns a dict mapping word code ``sum_j symbol_j * alphabet**j`` to its
    count over the ``prod(box_shape)`` shifts.
    """
    values = np.asarray(values, dtype=np.int64).reshape(tuple(region_shape))
    d = len(region_shape)
    codes = np.zeros(tuple(box_shape), dtype=np.int64)
    power = 1
    for off in window_offsets:
        sl = tuple(slice(off[i], off[i] + box_shape[i]) for i in range(d))
        codes += values[sl] * power
        power *= alphabet
    uniq, cnt = np.unique(codes, return_counts=True)
    return {int(u): int(c) for u, c in zip(uniq, cnt)}
