"""
Deterministic least-witness scans over an ordered candidate list.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def _first_in_chunk(check: Callable[[T], Optional[R]], chunk: Sequence[T]) -> Optional[R]:
    for candidate in chunk:
        found = check(candidate)
        if found is not None:
            return found
    return None


def least_witness(
    check: Callable[[T], Optional[R]],
    candidates: Sequence[T],
    threads: int = 1,
) -> Optional[R]:
    """
    Return check(c) for the first candidate c (in sequence order) where it is not None.

    With threads > 1 the candidates are cut into contiguous chunks that are
    scanned concurrently; the answer from the earliest chunk wins, so the
    result is the same for every thread count.

    Args:
        check: Returns a witness or None
        candidates: Ordered candidates
        threads: Worker count

    Returns:
        The witness for the least successful candidate, or None
    """
    if threads <= 1 or len(candidates) < 2 * threads:
        return _first_in_chunk(check, candidates)

    size = -(-len(candidates) // (threads * 4))
    chunks = [candidates[i:i + size] for i in range(0, len(candidates), size)]
    logger.debug("[least_witness] %d candidates in %d chunks on %d threads",
                 len(candidates), len(chunks), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_first_in_chunk, check, chunk) for chunk in chunks]
        for future in futures:
            found = future.result()
            if found is not None:
                for rest in futures:
                    rest.cancel()
                return found
    return None
