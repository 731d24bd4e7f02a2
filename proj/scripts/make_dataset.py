#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Build the bundled MNIST subset in IDX format.

The full MNIST distribution is not redistributed here. Instead we convert
the 10k-image subset shipped with the `mnist` npm package (v1.1.0,
https://www.npmjs.com/package/mnist), which stores normalized 28x28
grayscale digits as JSON, back into the canonical IDX3 ubyte layout.

Usage:
    npm pack mnist@1.1.0 && tar xzf mnist-1.1.0.tgz
    python3 scripts/make_dataset.py package/src/digits data/

Produces class-balanced, deterministically shuffled train/test splits:
    mnist-train-images.idx3-ubyte   (8000 images)
    mnist-test-images.idx3-ubyte    (2000 images)
"""

import json
import struct
import sys
from pathlib import Path

import numpy as np

TRAIN_COUNT = 8000
TEST_COUNT = 2000
SHUFFLE_SEED = 12345


def write_idx3(path: Path, images: np.ndarray) -> None:
    assert images.dtype == np.uint8 and images.ndim == 3
    n, rows, cols = images.shape
    with open(path, "wb") as f:
        f.write(struct.pack(">iiii", 0x00000803, n, rows, cols))
        f.write(images.tobytes())


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__)
        return 1
    digits_dir, out_dir = Path(sys.argv[1]), Path(sys.argv[2])

    images = []
    for digit in range(10):
        flat = json.loads((digits_dir / f"{digit}.json").read_text())["data"]
        arr = np.asarray(flat, dtype=np.float64).reshape(-1, 28, 28)
        images.append(np.round(arr * 255.0).astype(np.uint8))
    stacked = np.concatenate(images, axis=0)
    print(f"loaded {stacked.shape[0]} images")

    rng = np.random.default_rng(SHUFFLE_SEED)
    order = rng.permutation(stacked.shape[0])
    stacked = stacked[order]

    if stacked.shape[0] < TRAIN_COUNT + TEST_COUNT:
        print("not enough images for the requested split", file=sys.stderr)
        return 1

    out_dir.mkdir(parents=True, exist_ok=True)
    write_idx3(out_dir / "mnist-train-images.idx3-ubyte", stacked[:TRAIN_COUNT])
    write_idx3(
        out_dir / "mnist-test-images.idx3-ubyte",
        stacked[TRAIN_COUNT : TRAIN_COUNT + TEST_COUNT],
    )
    print(f"wrote {TRAIN_COUNT} train / {TEST_COUNT} test images to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
