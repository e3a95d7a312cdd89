"""Pure numpy fallback for the compiled segment-product kernel.

Vectorized over energies, looping over segments; same contract as
``_ckernels.cell_products``.
"""

import numpy as np

BACKEND = "python"

_RESCALE_AT = 2.0**200


def cell_products(widths, wells, k0, k1):
    widths = np.asarray(widths, dtype=np.float64)
    wells = np.asarray(wells, dtype=bool)
    k0 = np.asarray(k0, dtype=np.float64)
    k1 = np.asarray(k1, dtype=np.float64)
    if wells.shape != widths.shape or k1.shape != k0.shape:
        raise ValueError("shape mismatch between widths/wells or k0/k1")
    q = np.zeros((4,) + k0.shape)
    q[0] = q[3] = 1.0
    shift = np.zeros(k0.shape)
    for w, is_well in zip(widths, wells):
        k = k1 if is_well else k0
        phase = k * w
        c = np.cos(phase)
        sn = np.sin(phase)
        x12 = sn / k
        x21 = k * sn
        q11, q12, q21, q22 = q
        q = np.array([
            q11 * c - q12 * x21,
            q11 * x12 + q12 * c,
            q21 * c + q22 * x21,
            q22 * c - q21 * x12,
        ])
        big = np.abs(q).sum(axis=0)
        if np.any(big > _RESCALE_AT):
            _, e = np.frexp(big)
            e = np.where(big > _RESCALE_AT, e, 0)
            q = np.ldexp(q, -e)
            shift += e
    return np.concatenate([q, shift[None]]).T.copy()
