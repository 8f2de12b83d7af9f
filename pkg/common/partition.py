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
Partition utility functions.
"""

from typing import Any, List


def partition_by_groups(data: List[Any], groups: int) -> List[List[Any]]:
    """
    Partition a list by groups, dealing items round-robin.

    Examples:
        - data: [0,1,2,3,4]
        - groups: 2
        - return: [[0,2,4], [1,3]]
    """
    assert groups > 0
    return [data[i::groups] for i in range(groups)]


def split_budget(total: int, size: int) -> List[int]:
    """
    Split a sample budget into chunk sizes. Chunk count depends only on total and size.

    Examples:
        - total: 10
        - size: 4
        - return: [4, 4, 2]
    """
    assert total >= 0 and size > 0
    return [min(size, total - start) for start in range(0, total, size)]


def shift_list(data: List[Any], n: int) -> List[Any]:
    """
    Rotate a list left by n elements.

    Examples:
        - data: [1,2,3,4,5]
        - n: 3
        - return: [4,5,1,2,3]
    """
    return data[(n % len(data)) :] + data[: (n % len(data))]


def cyclic_window(data: List[Any], start: int, width: int) -> List[Any]:
    """
    Consecutive items of a cyclic sequence.

    Examples:
        - data: [1,2,3,4,5]
        - start: 3
        - width: 3
        - return: [4,5,1]
    """
    assert 0 <= width <= len(data)
    return shift_list(data, start)[:width]
