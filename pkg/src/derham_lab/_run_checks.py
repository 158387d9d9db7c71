from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

from derham_lab.checks._base import Check

logger = logging.getLogger(__name__)


def run_checks(checks: list[Check], threads: int = 1) -> list[dict]:
    """Compute the given checks.

    Checks are independent and may run on a pool of worker threads; the
    returned list always follows the order of ``checks``.

    Args:
        checks (List[Check]): list of instantiated check objects to compute
        threads (int): largest number of worker threads

    Returns:
        List[Dict]: List of dictionaries with one dictionary per Check object
    """
    if not all(isinstance(c, Check) for c in checks):
        raise TypeError("checks must be a list of instantiated Check objects")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")

    if threads == 1 or len(checks) < 2:
        return [_check.compute().to_dict() for _check in checks]
    logger.info(f"Running {len(checks)} checks on {min(threads, len(checks))} threads")
    with ThreadPoolExecutor(max_workers=min(threads, len(checks))) as pool:
        futures = [pool.submit(_check.compute) for _check in checks]
        return [future.result().to_dict() for future in futures]
