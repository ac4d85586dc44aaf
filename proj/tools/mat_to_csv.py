#!/usr/bin/env python3
"""Convert a MATLAB .mat dataset with X (n x p) and Y (n x 1) into the
delimited layout the graces CLI reads: header row, label first, then features.
"""
import argparse
import sys

import numpy as np
from scipy.io import loadmat


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("mat")
    ap.add_argument("csv")
    ap.add_argument("--x-key", default="X")
    ap.add_argument("--y-key", default="Y")
    args = ap.parse_args(argv)

    data = loadmat(args.mat)
    x = np.asarray(data[args.x_key], dtype=float)
    y = np.asarray(data[args.y_key]).ravel()
    if x.shape[0] != y.shape[0]:
        sys.exit(f"{args.mat}: {x.shape[0]} rows in {args.x_key} but {y.shape[0]} labels")
    if len(np.unique(y)) != 2:
        sys.exit(f"{args.mat}: expected 2 classes, found {len(np.unique(y))}")

    with open(args.csv, "w") as out:
        out.write(",".join(["label"] + [f"f{i}" for i in range(x.shape[1])]) + "\n")
        for label, row in zip(y, x):
            out.write(",".join([str(label.item())] + [repr(float(v)) for v in row]) + "\n")
    print(f"{args.csv}: n={x.shape[0]} p={x.shape[1]}")


if __name__ == "__main__":
    main()
