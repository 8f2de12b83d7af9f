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
Thread-pool helpers with order-stable results.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Sequence

from common.partition import partition_by_groups


def map_ordered(fn: Callable[[Any], Any], items: Sequence[Any], threads: int = 1) -> List[Any]:
    """
    Apply fn to every item and return the results in item order.
    Items are dealt round-robin to at most `threads` workers; the result never depends on it.

    Examples:
        - fn: lambda x: x * x
        - items: [1,2,3]
        - threads: 2
        - return: [1,4,9]
    """
    assert threads > 0
    items = list(items)
    if threads == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    groups = partition_by_groups(list(enumerate(items)), min(threads, len(items)))

    def run_group(group):
        return [(index, fn(item)) for index, item in group]

    results: List[Any] = [None] * len(items)
    with ThreadPoolExecutor(max_workers=len(groups)) as pool:
        for group_result in pool.map(run_group, groups):
            for index, value in group_result:
                results[index] = value
    return results
