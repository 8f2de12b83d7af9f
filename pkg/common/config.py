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
Configuration utility functions
"""

import os
from fractions import Fraction
from typing import Any, List, Optional, Tuple, Union
from omegaconf import DictConfig, ListConfig, OmegaConf

OmegaConf.register_new_resolver("eval", eval, replace=True)
OmegaConf.register_new_resolver("fraction", lambda text: str(Fraction(str(text))), replace=True)

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_CONFIG = os.path.join(REPO_ROOT, "configs", "default.yaml")


def load_config(
    path: Optional[str] = None, argv: Optional[List[str]] = None, _chain: Tuple[str, ...] = ()
) -> Union[DictConfig, ListConfig]:
    """
    Load a configuration, apply dotlist overrides, then resolve inheritance.
    Parent paths in __inherit__ are taken relative to the repository root when not absolute.
    Overrides are merged into the child first, so they win over every parent.
    """
    path = resolve_path(path or DEFAULT_CONFIG)
    if path in _chain:
        raise ValueError(f"Config inheritance cycle: {' -> '.join(_chain + (path,))}")
    config = OmegaConf.load(path)
    if argv:
        config = OmegaConf.merge(config, OmegaConf.from_dotlist(list(argv)))
    return _resolve_node(config, _chain + (path,))


def resolve_path(path: str) -> str:
    if os.path.isabs(path) or os.path.exists(path):
        return path
    return os.path.join(REPO_ROOT, path)


def _resolve_node(node: Any, chain: Tuple[str, ...]) -> Any:
    """
    Resolve __inherit__ at this node, then in every nested mapping or list.
    __inherit__ holds one parent path or a list of them; later parents override earlier ones.
    """
    if isinstance(node, DictConfig) and "__inherit__" in node:
        parents = node.pop("__inherit__")
        parents = list(parents) if isinstance(parents, ListConfig) else [parents]
        if not all(isinstance(parent, str) for parent in parents):
            raise ValueError(f"__inherit__ expects paths, got {parents}")
        merged = [load_config(parent, _chain=chain) for parent in parents]
        node = OmegaConf.merge(*merged, node) if len(node) else OmegaConf.merge(*merged)
    if isinstance(node, DictConfig):
        for key in list(node.keys()):
            if isinstance(node.get(key), (DictConfig, ListConfig)):
                node[key] = _resolve_node(node.get(key), chain)
    elif isinstance(node, ListConfig):
        for index in range(len(node)):
            if isinstance(node.get(index), (DictConfig, ListConfig)):
                node[index] = _resolve_node(node.get(index), chain)
    return node


def select(config: Optional[DictConfig], key: str, default: Any = None) -> Any:
    """
    Read a dotted key, falling back to default when the config or key is missing.
    """
    if config is None:
        return default
    value = OmegaConf.select(config, key, default=default)
    if isinstance(value, (DictConfig, ListConfig)):
        return OmegaConf.to_container(value, resolve=True)
    return value


def select_fraction(config: Optional[DictConfig], key: str, default: Union[str, Fraction]) -> Fraction:
    """
    Read an exact rational written as "p/q", an integer, or a decimal string.
    """
    return Fraction(str(select(config, key, default)))
