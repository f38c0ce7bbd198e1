# Based on: https://github.com/ZhymabekRoman/platonus_api_wrapper/blob/main/platonus_api_wrapper/utils/lru_cacher.py

from collections import OrderedDict
from threading import RLock

_MISSING = object()


class LRUDictCache(OrderedDict):
    """
    A dict which forgets its least recently used key once `maxsize` is reached

    Reads and writes hold a lock, so one cache can be shared by the threads of a pool.
    Use `get` rather than `key in cache` followed by `cache[key]`: another thread may evict in between.
    """

    def __init__(self, maxsize=1024, *args, **kwds):
        self.maxsize = maxsize
        self.hits = 0
        self._lock = RLock()
        super().__init__(*args, **kwds)

    def __getitem__(self, key):
        with self._lock:
            value = super().__getitem__(key)
            self.move_to_end(key)
            self.hits += 1
            return value

    def get(self, key, default=None):
        with self._lock:
            value = super().get(key, _MISSING)
            if value is _MISSING:
                return default
            self.move_to_end(key)
            self.hits += 1
            return value

    def __setitem__(self, key, value):
        with self._lock:
            if key in self:
                self.move_to_end(key)
            super().__setitem__(key, value)
            while len(self) > self.maxsize:
                del self[next(iter(self))]
