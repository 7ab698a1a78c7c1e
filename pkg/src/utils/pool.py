# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

import logging
from multiprocessing import Pool
from typing import Callable, List, Sequence

logger = logging.getLogger(__name__)


def ordered_map(func: Callable, items: Sequence, jobs: int = 1) -> List:
    """Maps `func` over `items`, returning results in input order.

    With jobs > 1 the cells run in a process pool; `func` and the items must
    then be picklable (module-level functions, frozen dataclasses).
    """
    items = list(items)
    if jobs < 1:
        raise ValueError(f'jobs must be >= 1, got {jobs}')
    if jobs == 1 or len(items) < 2:
        return [func(item) for item in items]
    workers = min(jobs, len(items))
    logger.info(f'Evaluating {len(items)} cells with {workers} workers')
    with Pool(processes=workers) as pool:
        return pool.map(func, items)
