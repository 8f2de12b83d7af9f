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
Decorators for the expensive entry points.
"""

import functools
import time
from typing import Any, Callable

from common.logger import get_logger

logger = get_logger(__name__)


def describe_argument(value: Any) -> str:
    """
    Short description of an argument for entry logs.
    Graph-like values (anything with integer n and m) are shown by size only.

    Examples:
        - value: blowup of C5 with parts of 4
        - return: "graph(n=20, m=80)"
    """
    n, m = getattr(value, "n", None), getattr(value, "m", None)
    if isinstance(n, int) and isinstance(m, int):
        return f"graph(n={n}, m={m})"
    if hasattr(value, "value") and isinstance(value.value, str):
        return value.value
    if isinstance(value, (int, float, str)) or value is None:
        return repr(value)
    return type(value).__name__


def log_on_entry(func: Callable) -> Callable:
    """
    Functions with this decorator will log the function name and a summary of the positional arguments at entry.
    When using multiple decorators, this must be applied innermost to properly capture the name.
    """

    @functools.wraps(func)
    def log_on_entry_wrapper(*args, **kwargs):
        summary = ", ".join(describe_argument(arg) for arg in args)
        logger.info(f"Entering {func.__name__}({summary})")
        return func(*args, **kwargs)

    return log_on_entry_wrapper


def log_runtime(func: Callable) -> Callable:
    """
    Functions with this decorator will log the runtime, also when they raise.
    """

    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.warning(
                f"Failed {func.__name__} after {time.perf_counter() - start:.3f} seconds: {type(e).__name__}"
            )
            raise
        logger.info(f"Completed {func.__name__} in {time.perf_counter() - start:.3f} seconds.")
        return result

    return wrapped
