"""Pure-numpy fallback for the truncated-series convolution kernel."""

import numpy as np

BACKEND = "pure"


def series_mul(a, b, nout, p, red_rows):
    """Truncated product of two coefficient arrays over F_{p^m}.

    a, b: int64 arrays of shape (Na, m), (Nb, m) — coefficient of u^i is the
    length-m vector over F_p in row i.  red_rows: int64 (m-1, m) array whose
    row k expresses x^(m+k) in the power basis.  Returns shape (nout, m).
    """
    na, m = a.shape
    nb = b.shape[0]
    full = np.zeros((min(nout, na + nb - 1), 2 * m - 1), dtype=np.int64)
    for i in range(min(na, full.shape[0])):
        row = a[i]
        if not row.any():
            continue
        jmax = min(nb, full.shape[0] - i)
        for k in range(m):
            if row[k]:
                full[i : i + jmax, k : k + m] += row[k] * b[:jmax]
    full %= p
    out = np.zeros((nout, m), dtype=np.int64)
    upto = full.shape[0]
    out[:upto] = full[:, :m]
    for k in range(m - 1):
        col = full[:, m + k]
        nz = col.any()
        if nz:
            out[:upto] = (out[:upto] + col[:, None] * red_rows[k][None, :]) % p
    out %= p
    return out
