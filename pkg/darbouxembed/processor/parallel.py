"""Order-preserving parallel map over grid samples"""

import logging
from typing import Callable, Iterable, List, Optional

from joblib import Parallel, delayed

from ..config import get_settings

logger = logging.getLogger(__name__)


def map_grid(func: Callable, items: Iterable, n_jobs: Optional[int] = None) -> List:
    """
    Apply func to every item, in order.

    Args:
        func: Pure function of one item
        items: Samples (e.g. (u, v) pairs)
        n_jobs: Worker threads; defaults to DARBOUX_EMBED_THREADS

    Returns:
        Results in input order
    """
    items = list(items)
    n_jobs = n_jobs or get_settings().threads
    if n_jobs == 1 or len(items) < 2:
        return [func(item) for item in items]

    logger.debug(f"Mapping {len(items)} samples over {n_jobs} threads")
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)
