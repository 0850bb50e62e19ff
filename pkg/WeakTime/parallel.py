import logging
from joblib import Parallel, delayed

from .conf import get_setting

logger = logging.getLogger(__name__)


def parallel_map(func, items, n_jobs=None):
    """
    Apply ``func`` to every item, possibly on several threads.

    Results come back in input order whatever the thread count, so any
    aggregation downstream is deterministic.
    """
    items = list(items)
    n_jobs = get_setting('THREADS', n_jobs)
    if n_jobs == 1 or len(items) < 2:
        return [func(item) for item in items]
    logger.debug(f"Dispatching {len(items)} evaluations over {n_jobs} threads")
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)
