"""Small shared helpers: valuations, Legendre symbol, bounded thread pool."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def val_p(x: int, p: int) -> int | None:
    """Exact p-adic valuation of an integer; None for 0."""
    if x == 0:
        return None
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def capped_val(residue: int, p: int, k: int) -> int:
    """Valuation of a residue mod p^k, capped at k (residue 0 reports k)."""
    if residue % p**k == 0:
        return k
    v = val_p(residue % p**k, p)
    return min(v, k)


def is_nonresidue(d: int, p: int) -> bool:
    """True when d is a quadratic non-residue mod an odd prime p."""
    d %= p
    if d == 0:
        return False
    return pow(d, (p - 1) // 2, p) == p - 1


def default_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod p (p odd)."""
    for d in range(2, p):
        if is_nonresidue(d, p):
            return d
    raise ValueError(f"no non-residue found mod {p}")


def thread_count() -> int:
    raw = os.environ.get("THETA_FORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Map fn over items, using threads when THETA_FORGE_THREADS > 1.

    Work items must be independent; result order matches input order.
    """
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
