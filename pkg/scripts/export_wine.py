"""Write the UCI wine data (bundled with scikit-learn) as a CSV with a class column."""

import argparse

from sklearn.datasets import load_wine

from r2c.io import write_csv

CLASS_NAMES = ("Barolo", "Grignolino", "Barbera")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("output", nargs="?", default="wine.csv")
    args = ap.parse_args()
    bunch = load_wine()
    header = list(bunch.feature_names) + ["class"]
    rows = ([*x, CLASS_NAMES[y]] for x, y in zip(bunch.data.tolist(), bunch.target.tolist()))
    write_csv(args.output, header, rows)


if __name__ == "__main__":
    main()
