#!/usr/bin/env python3
"""Builds a small MNIST subset in IDX format.

The 5,000-image MNIST sample bundled with the mlxtend wheel (500 per class)
is shuffled with a fixed seed and split into train / test IDX files:

  <out>/train-images-idx3-ubyte  <out>/train-labels-idx1-ubyte
  <out>/t10k-images-idx3-ubyte   <out>/t10k-labels-idx1-ubyte

Usage: fetch_mnist_subset.py [--out data/mnist] [--train 4000] [--wheel PATH]
"""

import argparse
import glob
import gzip
import os
import random
import struct
import subprocess
import sys
import tempfile
import zipfile

WHEEL = "mlxtend==0.24.0"
MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def download_wheel(dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", WHEEL, "--no-deps",
         "--quiet", "-d", dest],
        check=True)
    wheels = glob.glob(os.path.join(dest, "mlxtend-*.whl"))
    if not wheels:
        sys.exit("pip download produced no mlxtend wheel")
    return wheels[0]


def read_rows(wheel):
    with zipfile.ZipFile(wheel) as z:
        text = gzip.decompress(z.read(MEMBER)).decode("ascii")
    rows = []
    for line in text.strip().splitlines():
        values = [int(float(v)) for v in line.split(",")]
        if len(values) != 785:
            sys.exit("unexpected row width %d" % len(values))
        rows.append((bytes(values[:784]), values[784]))
    return rows


def write_idx(prefix, rows):
    with open(prefix + "-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(rows), 28, 28))
        for pixels, _ in rows:
            f.write(pixels)
    with open(prefix + "-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(rows)))
        f.write(bytes(label for _, label in rows))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data/mnist")
    ap.add_argument("--train", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--wheel", help="use an already downloaded wheel")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or download_wheel(tmp)
        rows = read_rows(wheel)
    if not 0 < args.train < len(rows):
        sys.exit("--train must lie in (0, %d)" % len(rows))
    random.Random(args.seed).shuffle(rows)
    os.makedirs(args.out, exist_ok=True)
    write_idx(os.path.join(args.out, "train"), rows[:args.train])
    write_idx(os.path.join(args.out, "t10k"), rows[args.train:])
    print("wrote %d train / %d test images to %s"
          % (args.train, len(rows) - args.train, args.out))


if __name__ == "__main__":
    main()
