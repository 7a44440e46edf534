"""Process fan-out capped by the KSPM_THREADS environment variable."""
import os
from concurrent.futures import ProcessPoolExecutor

from .exceptions import InputError


def max_workers():
    raw = os.environ.get("KSPM_THREADS")
    cpus = os.cpu_count() or 1
    if raw is None or raw == "":
        return cpus
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"KSPM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"KSPM_THREADS must be a positive integer, got {raw!r}")
    return min(n, cpus)


def pmap(fn, items):
    """Order-preserving map; runs in-process when one worker is allowed."""
    items = list(items)
    n = min(max_workers(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
