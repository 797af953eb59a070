# Copyright 2026 The echotrace Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Geometry-based room impulse response simulation.

The compiled extension carries the implementation; this package re-exports
its surface. When built straight from CMake (no pip install), point
ECHOTRACE_MODULE_DIR at the directory containing the extension.
"""

import os
import sys

try:
    from ._echotrace import *  # noqa: F401,F403
    from ._echotrace import __version__  # noqa: F401
except ImportError:  # pragma: no cover - direct CMake builds
    _module_dir = os.environ.get("ECHOTRACE_MODULE_DIR")
    if not _module_dir:
        raise
    sys.path.insert(0, _module_dir)
    from _echotrace import *  # noqa: F401,F403
    from _echotrace import __version__  # noqa: F401
