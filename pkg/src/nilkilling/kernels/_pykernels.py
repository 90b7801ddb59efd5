"""Pure-Python modular elimination, used when the compiled kernel is absent."""

import numpy as np

BACKEND = "python"


def rref_mod_p(rows, p):
    """Row-reduce an integer matrix modulo the prime ``p``.

    ``rows`` is a 2-D array of residues in ``[0, p)``.  Returns
    ``(reduced, pivots)`` where ``reduced`` holds the nonzero rows of the
    reduced row echelon form (one per pivot, ordered by pivot column).
    """
    rows = np.asarray(rows, dtype=np.int64)
    m, n = rows.shape
    pivots = []
    basis = []  # kept fully reduced against each other
    for r in range(m):
        if len(pivots) == n:
            break
        buf = [int(v) for v in rows[r]]
        for piv, prow in zip(pivots, basis):
            c = buf[piv]
            if c:
                buf = [(a - c * b) % p for a, b in zip(buf, prow)]
        lead = next((j for j, v in enumerate(buf) if v), -1)
        if lead < 0:
            continue
        inv = pow(buf[lead], p - 2, p)
        buf = [(v * inv) % p for v in buf]
        for i, prow in enumerate(basis):
            c = prow[lead]
            if c:
                basis[i] = [(a - c * b) % p for a, b in zip(prow, buf)]
        pivots.append(lead)
        basis.append(buf)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    reduced = np.array([basis[i] for i in order], dtype=np.int64).reshape(len(order), n)
    return reduced, [pivots[i] for i in order]
