"""
Search Kernel - shared processing layer
Caches morphism searches, keeps search statistics and runs batches of
independent checks, optionally in parallel.

Every module that searches for morphisms goes through the same kernel, so
repeated questions (the same divisor check inside a census, the same hom-set
inside a normalization proof) are answered once.
"""
import logging
from collections import OrderedDict
from multiprocessing import Pool, cpu_count
from typing import Any, Callable, Dict, Hashable, List, Optional

from .config import LabConfig, get_config

logger = logging.getLogger(__name__)


class SearchKernel:
    """
    Search Kernel
    Core processing layer providing:
    - Memoized morphism searches
    - Search statistics
    - Batch processing
    """

    def __init__(self, config: Optional[LabConfig] = None):
        self.config = config or get_config()
        self.num_workers = self.config.num_parallel_workers or cpu_count()

        # (source key, target key, mode, restriction) -> tuple of maps
        self.search_cache: "OrderedDict[Hashable, Any]" = OrderedDict()

        # Statistics
        self.stats = {
            'searches': 0,
            'nodes_visited': 0,
            'cache_hits': 0,
            'parallel_operations': 0
        }

    def cached(self, key: Hashable, compute: Callable[[], Any], use_cache: bool = True) -> Any:
        """
        Return the cached value for key, computing and storing it on a miss.
        The oldest entry is evicted once cache_size is reached.
        """
        if use_cache and self.config.enable_caching and key in self.search_cache:
            self.stats['cache_hits'] += 1
            self.search_cache.move_to_end(key)
            return self.search_cache[key]

        value = compute()
        self.stats['searches'] += 1

        if use_cache and self.config.enable_caching:
            self.search_cache[key] = value
            if len(self.search_cache) > self.config.cache_size:
                self.search_cache.popitem(last=False)
        return value

    def count_nodes(self, nodes: int) -> None:
        self.stats['nodes_visited'] += nodes

    def batch_process(self, items: List[Any], process_func: Callable[[Any], Any], parallel: bool = False) -> List[Any]:
        """
        Generic batch processing with parallelization.
        process_func must be a module-level function when parallel is set.
        Results keep the order of items.
        """
        if not parallel or len(items) < 10:
            return [process_func(item) for item in items]

        with Pool(processes=self.num_workers) as pool:
            results = pool.map(process_func, items)

        self.stats['parallel_operations'] += 1
        return results

    def get_stats(self) -> Dict:
        """Get kernel statistics"""
        return {
            **self.stats,
            'cache_size': len(self.search_cache),
            'num_workers': self.num_workers
        }

    def clear_cache(self):
        """Clear caches"""
        self.search_cache.clear()
        logger.info("Search kernel cache cleared")


# Global kernel instance (singleton pattern)
_kernel_instance: Optional[SearchKernel] = None


def get_kernel(config: Optional[LabConfig] = None) -> SearchKernel:
    """Get or create global kernel instance"""
    global _kernel_instance
    if _kernel_instance is None:
        _kernel_instance = SearchKernel(config)
    return _kernel_instance


def reset_kernel():
    """Reset global kernel (for testing)"""
    global _kernel_instance
    _kernel_instance = None
