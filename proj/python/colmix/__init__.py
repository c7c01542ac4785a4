# Copyright 2026 The ColMix Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Copy-paste collage augmentation, PixMix and corruption benchmarks for detection.

Images are ``numpy`` arrays of shape ``(H, W, 3)`` and dtype ``uint8`` in the
channel order OpenCV uses (BGR). Boxes are ``(x, y, w, h, category)`` tuples in
pixels. Every array operation returns a ``(pixels, boxes)`` pair and is
bit-identical to the ``colmix`` command-line tool for the same seed.
"""

from ._colmix import (
    CORRUPTIONS,
    ConfigError,
    Error,
    IoError,
    ParseError,
    SelectionError,
    ValidationError,
    __version__,
    augment,
    corrupt,
    evaluate,
    py_collage,
    py_corrupt,
    py_pixmix,
)

collage = py_collage
pixmix = py_pixmix
corrupt_image = py_corrupt

__all__ = [
    "CORRUPTIONS",
    "ConfigError",
    "Error",
    "IoError",
    "ParseError",
    "SelectionError",
    "ValidationError",
    "__version__",
    "augment",
    "collage",
    "corrupt",
    "corrupt_image",
    "evaluate",
    "pixmix",
    "py_collage",
    "py_corrupt",
    "py_pixmix",
]
