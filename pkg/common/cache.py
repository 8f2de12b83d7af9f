# // Copyright (c) 2025 Bytedance Ltd. and/or its affiliates
# //
# // Licensed under the Apache License, Version 2.0 (the "License");
# // you may not use this file except in compliance with the License.
# // You may obtain a copy of the License at
# //
# //     http://www.apache.org/licenses/LICENSE-2.0
# //
# // Unless required by applicable law or agreed to in writing, software
# // distributed under the License is distributed on an "AS IS" BASIS,
# // WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# // See the License for the specific language governing permissions and
# // limitations under the License.

"""
Keyed memoization for derived structures.
"""

import threading
from typing import Any, Callable, Dict, Optional


class Cache:
    """Memoize expensive derived structures (enumerations, extensions) by key."""

    def __init__(self, disable: bool = False, prefix: str = "", cache: Optional[Dict] = None):
        self.cache = cache if cache is not None else {}
        self.disable = disable
        self.prefix = prefix
        self._lock = threading.RLock()

    def __call__(self, key: str, fn: Callable[[], Any]) -> Any:
        if self.disable:
            return fn()

        key = self.prefix + key
        with self._lock:
            if key in self.cache:
                return self.cache[key]
        # Computed outside the lock; concurrent misses agree on the value.
        result = fn()
        with self._lock:
            return self.cache.setdefault(key, result)

    def namespace(self, namespace: str) -> "Cache":
        child = Cache(
            disable=self.disable,
            prefix=self.prefix + namespace + ".",
            cache=self.cache,
        )
        child._lock = self._lock
        return child

    def get(self, key: str) -> Any:
        key = self.prefix + key
        with self._lock:
            return self.cache[key]

    def clear(self):
        with self._lock:
            for key in [k for k in self.cache if k.startswith(self.prefix)]:
                del self.cache[key]
