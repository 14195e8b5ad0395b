#!/usr/bin/env python3
"""Write the natural-image benchmark corpus (512x512 8-bit PGM) from the
sample images bundled with scikit-image."""

import argparse
import pathlib

import numpy as np
from skimage import color, data, util

IMAGES = {
    "astronaut": lambda: color.rgb2gray(data.astronaut()),
    "brick": data.brick,
    "camera": data.camera,
    "grass": data.grass,
    "gravel": data.gravel,
    "ihc": lambda: color.rgb2gray(data.immunohistochemistry()),
    "moon": data.moon,
}


def write_pgm(path, img):
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.astype(np.uint8).tobytes())


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", type=pathlib.Path)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name, load in IMAGES.items():
        img = util.img_as_ubyte(load())
        if img.shape != (512, 512):
            raise SystemExit(f"{name}: unexpected shape {img.shape}")
        write_pgm(args.out_dir / f"{name}.pgm", img)
        print(args.out_dir / f"{name}.pgm")


if __name__ == "__main__":
    main()
