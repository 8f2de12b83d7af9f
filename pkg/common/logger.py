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
Logging utility functions.
"""

import logging
import sys
from typing import Optional, Union

# Reports go to stdout, so log records stay on stderr.
_default_handler = logging.StreamHandler(sys.stderr)
_default_handler.setFormatter(
    logging.Formatter(
        "%(asctime)s "
        + "[%(threadName).12s][%(name)s][%(levelname).5s] "
        + "%(message)s"
    )
)

_level = logging.INFO
_loggers = {}


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger.
    """
    logger = logging.getLogger(name)
    if name not in _loggers:
        logger.addHandler(_default_handler)
        logger.propagate = False
        _loggers[name] = logger
    logger.setLevel(_level)
    return logger


def set_log_level(level: Union[int, str]):
    """
    Change the level of every logger handed out so far, and of future ones.
    """
    global _level
    _level = logging.getLevelName(level.upper()) if isinstance(level, str) else level
    for logger in _loggers.values():
        logger.setLevel(_level)
