"""
Ordered parallel map used by the verification suites
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
U = TypeVar("U")


def ordered_map(func: Callable[[T], U], items: Iterable[T], workers: int = 1) -> List[U]:
    """Apply func to every item, results in input order regardless of completion order"""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
