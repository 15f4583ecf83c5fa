"""Small numeric helpers used across modules."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.polynomial.legendre import leggauss


def sinc(t):
    """sin(t)/t with sinc(0) = 1; series branch below 1e-4 to avoid cancellation."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    big = np.abs(t) > 1e-4
    out[big] = np.sin(t[big]) / t[big]
    ts = t[~big]
    out[~big] = 1.0 - ts * ts / 6.0 + ts ** 4 / 120.0
    if out.ndim == 0:
        return float(out)
    return out


def gauss_legendre_panels(lo, hi, panels, order=24):
    """Composite Gauss-Legendre nodes and weights on [lo, hi]."""
    x0, w0 = leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (np.outer(half, x0) + mid[:, None]).ravel()
    ws = np.outer(half, w0).ravel()
    return xs, ws


def pmap(fn, items, threads=1):
    """Map preserving input order; thread pool when threads > 1.

    The reduction stays deterministic because results are reassembled in
    the submission order, independent of completion order.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def canonical_hash(mapping: dict) -> str:
    """Stable hex digest of a flat configuration mapping."""
    blob = json.dumps(mapping, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def atomic_write_text(path, text):
    """Write text to path atomically (tmp file + rename)."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
