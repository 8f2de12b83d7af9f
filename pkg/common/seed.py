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

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    Create an independent generator for a sub-stream of a seed.
    The same (seed, stream) always yields the same sequence, whatever thread consumes it.

    Examples:
        - make_rng(42) -> root stream
        - make_rng(42, 3) -> the 4th child stream of 42
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))
