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

import hashlib

import cv2
import numpy as np
import pytest

import colmix
from conftest import read_boxes, write_dataset


def test_module_metadata():
    assert colmix.__version__ == "0.1.0"
    assert len(colmix.CORRUPTIONS) == 15
    assert colmix.CORRUPTIONS[0] == "gaussian_noise"


def test_corrupt_returns_new_array_and_keeps_boxes(samples):
    img, boxes = samples[0]
    before = hashlib.sha256(img.tobytes()).hexdigest()
    out, out_boxes = colmix.py_corrupt(img, "motion_blur", 3, seed=5, boxes=boxes)
    assert out.shape == img.shape and out.dtype == np.uint8
    assert out_boxes == boxes
    assert hashlib.sha256(img.tobytes()).hexdigest() == before
    again, _ = colmix.py_corrupt(img, "motion_blur", 3, seed=5)
    assert np.array_equal(out, again)


def test_invalid_kind_names_valid_kinds(samples):
    with pytest.raises(colmix.ConfigError) as info:
        colmix.py_corrupt(samples[0][0], "sunburn", 2)
    assert "gaussian_noise" in str(info.value)
    assert "jpeg_compression" in str(info.value)


def test_invalid_severity_and_shape(samples):
    with pytest.raises(colmix.Error):
        colmix.py_corrupt(samples[0][0], "fog", 6)
    with pytest.raises(colmix.ValidationError):
        colmix.py_corrupt(np.zeros((8, 8), np.uint8), "fog", 1)


def test_out_of_bounds_box_rejected(samples):
    img, _ = samples[0]
    with pytest.raises(colmix.ValidationError):
        colmix.py_corrupt(img, "fog", 1, boxes=[(120, 0, 20, 10, 1)])


def test_zero_rounds_pixmix_is_identity(samples, mixer_dir):
    img, boxes = samples[1]
    out, out_boxes = colmix.py_pixmix(img, mixer_dir, {"pixmix_rounds": 0}, seed=9, boxes=boxes)
    assert np.array_equal(out, img)
    assert out_boxes == boxes


def test_pixmix_missing_mixers_raises(samples, tmp_path):
    with pytest.raises(colmix.ConfigError):
        colmix.py_pixmix(samples[0][0], tmp_path / "nowhere")


def test_collage_adds_boxes_within_bounds(samples):
    out, boxes = colmix.py_collage(samples, {"profile": "rareplanes"}, seed=11, index=2)
    h, w = out.shape[:2]
    assert (h, w) == samples[2][0].shape[:2]
    assert len(boxes) >= len(samples[2][1])
    for x, y, bw, bh, _ in boxes:
        assert 0 <= x and 0 <= y and x + bw <= w and y + bh <= h


def test_collage_without_annotations_raises(samples):
    empty = [(img, []) for img, _ in samples]
    with pytest.raises(colmix.SelectionError):
        colmix.py_collage(empty)
    with pytest.raises(colmix.SelectionError):
        colmix.py_collage([])


def test_bad_config_key_raises(samples):
    with pytest.raises(colmix.ConfigError):
        colmix.py_collage(samples, {"no_such_key": 1})


def test_collage_matches_augment_command(samples, tmp_path):
    data = write_dataset(tmp_path / "data", samples)
    out_dir = tmp_path / "out"
    colmix.augment("collage", data, out_dir, {"min_size": 10}, seed=21, epochs=2, workers=2)
    written, names = read_boxes(out_dir / "annotations.json")
    n = len(samples)
    for epoch in range(2):
        for index in range(n):
            image_id = epoch * n + index + 1
            pixels, boxes = colmix.py_collage(samples, {"min_size": 10}, seed=21, index=index, epoch=epoch)
            disk = cv2.imread(str(out_dir / "images" / names[image_id]), cv2.IMREAD_COLOR)
            assert np.array_equal(pixels, disk)
            assert boxes == written[image_id]


def test_pixmix_matches_augment_command(samples, tmp_path, mixer_dir):
    data = write_dataset(tmp_path / "data", samples)
    out_dir = tmp_path / "out"
    config = {"mixers": str(mixer_dir), "pixmix_rounds": 3}
    colmix.augment("pixmix", data, out_dir, config, seed=4)
    written, names = read_boxes(out_dir / "annotations.json")
    for index, (img, boxes) in enumerate(samples):
        pixels, out_boxes = colmix.py_pixmix(img, mixer_dir, config, seed=4, boxes=boxes, index=index)
        disk = cv2.imread(str(out_dir / "images" / names[index + 1]), cv2.IMREAD_COLOR)
        assert np.array_equal(pixels, disk)
        assert out_boxes == written[index + 1]


def test_corrupt_matches_corrupt_command(samples, tmp_path):
    data = write_dataset(tmp_path / "data", samples)
    out_dir = tmp_path / "grid"
    kinds = ["shot_noise", "glass_blur", "frost", "elastic_transform", "jpeg_compression"]
    colmix.corrupt(data, out_dir, kinds=kinds, severities=[2, 5], seed=13, workers=2)
    for kind in kinds:
        for severity in (2, 5):
            for index, (img, _) in enumerate(samples):
                pixels, _ = colmix.py_corrupt(img, kind, severity, seed=13, index=index)
                disk = cv2.imread(str(out_dir / kind / str(severity) / "images" / f"img_{index + 1}.png"))
                assert np.array_equal(pixels, disk), (kind, severity, index)


def test_evaluate_reports_map(samples, tmp_path):
    import json

    data = write_dataset(tmp_path / "data", samples)
    dets = []
    for i, (_, boxes) in enumerate(samples, start=1):
        for x, y, w, h, c in boxes:
            dets.append({"image_id": i, "category_id": c, "bbox": [x, y, w, h], "score": 0.9})
    det_file = tmp_path / "dets.json"
    det_file.write_text(json.dumps(dets))
    text = colmix.evaluate(data / "annotations.json", det_file)
    assert "mAP 1" in text
