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

import json

import cv2
import numpy as np
import pytest


def make_image(rng, width, height):
    yy, xx = np.mgrid[0:height, 0:width]
    base = 110 + 50 * np.sin(xx / 7.0) * np.cos(yy / 11.0)
    img = np.repeat(base[..., None], 3, axis=2) + rng.normal(0, 10, (height, width, 3))
    return np.clip(img, 0, 255).astype(np.uint8)


def make_sample(rng, width=128, height=96, objects=3):
    img = make_image(rng, width, height)
    boxes = []
    for _ in range(objects):
        w, h = (int(v) for v in rng.integers(8, 20, size=2))
        x = int(rng.integers(0, width - w))
        y = int(rng.integers(0, height - h))
        color = [int(c) for c in rng.integers(0, 255, size=3)]
        img[y : y + h, x : x + w] = color
        boxes.append((x, y, w, h, int(rng.integers(1, 4))))
    return img, boxes


def write_dataset(root, samples):
    images_dir = root / "images"
    images_dir.mkdir(parents=True)
    coco = {"images": [], "annotations": [], "categories": [{"id": c, "name": f"class_{c}"} for c in (1, 2, 3)]}
    for i, (img, boxes) in enumerate(samples, start=1):
        name = f"img_{i}.png"
        cv2.imwrite(str(images_dir / name), img)
        coco["images"].append({"id": i, "file_name": name, "width": img.shape[1], "height": img.shape[0]})
        for x, y, w, h, c in boxes:
            coco["annotations"].append(
                {"id": len(coco["annotations"]) + 1, "image_id": i, "category_id": c, "bbox": [x, y, w, h]}
            )
    (root / "annotations.json").write_text(json.dumps(coco))
    return root


def read_boxes(annotation_file):
    coco = json.loads(annotation_file.read_text())
    out = {im["id"]: [] for im in coco["images"]}
    for a in coco["annotations"]:
        x, y, w, h = (int(round(v)) for v in a["bbox"])
        out[a["image_id"]].append((x, y, w, h, a["category_id"]))
    names = {im["id"]: im["file_name"] for im in coco["images"]}
    return out, names


@pytest.fixture
def samples():
    rng = np.random.default_rng(7)
    return [make_sample(rng) for _ in range(4)]


@pytest.fixture
def mixer_dir(tmp_path):
    rng = np.random.default_rng(3)
    root = tmp_path / "mixers"
    root.mkdir()
    for m in range(3):
        cv2.imwrite(str(root / f"fractal_{m}.png"), make_image(rng, 64, 64))
    return root
