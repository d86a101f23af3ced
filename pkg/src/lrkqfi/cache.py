"""Cache of pairing-function tables keyed by (L, alpha, convention).

The pairing function does not depend on mu or t, so a sweep over either
parameter only needs the table once.  Tables are stored unscaled (delta = 1).
"""
import math
import os
import tempfile
from pathlib import Path

import numpy as np


def _grid(L):
    n = np.arange(L // 2)
    return (2 * n + 1) * np.pi / L


def distance_weights(L, alpha, convention):
    """d_y^(-alpha) for y = 1 .. L-1 under the given distance rule."""
    y = np.arange(1, L, dtype=float)
    d = y if convention == "open" else np.minimum(y, L - y)
    if math.isinf(alpha):
        # only the nearest-neighbour distance survives
        return (d == 1.0).astype(float)
    return d ** (-float(alpha))


def pairing_sum(k, weights):
    """sum_y sin(k y) w_y, one direct sine per term."""
    y = np.arange(1, len(weights) + 1, dtype=float)
    return float(np.dot(np.sin(k * y), weights))


def compute_pairing_table(L, alpha, convention):
    """f_alpha(k) on the positive momentum grid (unit pairing strength)."""
    w = distance_weights(L, alpha, convention)
    return np.array([pairing_sum(k, w) for k in _grid(L)])


def cache_filename(L, alpha, convention):
    return f"f_L{L}_a{float(alpha):.6}_{convention}.csv"


class PairingCache:
    """In-memory (optionally on-disk) store of pairing tables.

    ``computations`` counts how many tables were actually summed; ``hits``
    counts lookups served from memory or disk.
    """

    def __init__(self, directory=None, enabled=True):
        self.directory = Path(directory) if directory is not None else None
        self.enabled = enabled
        self._tables = {}
        self.hits = 0
        self.computations = 0

    def clear(self):
        self._tables.clear()
        self.hits = 0
        self.computations = 0

    def table(self, L, alpha, convention):
        convention = str(getattr(convention, "value", convention))
        key = (int(L), float(alpha), convention)
        if not self.enabled:
            self.computations += 1
            return self._freeze(compute_pairing_table(*key))
        if key in self._tables:
            self.hits += 1
            return self._tables[key]
        table = self._load(*key) if self.directory is not None else None
        if table is None:
            self.computations += 1
            table = self._freeze(compute_pairing_table(*key))
            if self.directory is not None:
                self._store(key, table)
        else:
            self.hits += 1
        self._tables[key] = table
        return table

    @staticmethod
    def _freeze(arr):
        arr = np.ascontiguousarray(arr, dtype=float)
        arr.flags.writeable = False
        return arr

    def _path(self, L, alpha, convention):
        return self.directory / cache_filename(L, alpha, convention)

    def _header(self, L, alpha, convention):
        return f"# L={L} alpha={float(alpha)!r} convention={convention}"

    def _load(self, L, alpha, convention):
        path = self._path(L, alpha, convention)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
            if lines[0] != self._header(L, alpha, convention) or lines[1] != "k,f":
                return None
            rows = [line.split(",") for line in lines[2:]]
            k = np.array([float(r[0]) for r in rows])
            f = np.array([float(r[1]) for r in rows])
        except (OSError, IndexError, ValueError):
            return None
        if k.shape != (L // 2,) or not np.array_equal(k, _grid(L)):
            return None
        return self._freeze(f)

    def _store(self, key, table):
        L, alpha, convention = key
        self.directory.mkdir(parents=True, exist_ok=True)
        lines = [self._header(L, alpha, convention), "k,f"]
        lines += [f"{k:.17g},{f:.17g}" for k, f in zip(_grid(L), table)]
        # atomic replace: concurrent workers may race on the same key
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, self._path(L, alpha, convention))


default_cache = PairingCache()


def configure_default(directory=None, enabled=True):
    """Reset the process-wide cache (also used as a worker-pool initializer)."""
    default_cache.clear()
    default_cache.directory = Path(directory) if directory is not None else None
    default_cache.enabled = enabled
