#!/usr/bin/env python3
"""Download UCI datasets and rewrite them as headered CSV for `oksvm cv`.

Every output file has numeric feature columns and a final `class` column.
Rows with missing values ('?') are dropped. Binarization is left to the CLI
flags printed at the end (--positive-label, --keep-labels), except for
winequality-red, whose 0..10 quality score is mapped here to 0 (<= 5) and
1 (> 5).

    scripts/fetch_uci.py --out data                # download everything
    scripts/fetch_uci.py --out data banknote       # just one dataset
    scripts/fetch_uci.py --raw-dir ~/dl --out data # convert files fetched by hand

With --raw-dir the script reads the raw file named after the URL basename from
that directory instead of downloading it.
"""

import argparse
import csv
import io
import sys
import urllib.request
from pathlib import Path

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases/"


def split_comma(text):
    return [[c.strip() for c in line.split(",")] for line in text.splitlines() if line.strip()]


def banknote(text):
    header = ["variance", "skewness", "curtosis", "entropy", "class"]
    return header, split_comma(text)


def breast_cancer(text):
    header = ["clump_thickness", "cell_size", "cell_shape", "adhesion", "epithelial_size",
              "bare_nuclei", "bland_chromatin", "normal_nucleoli", "mitoses", "class"]
    return header, [r[1:] for r in split_comma(text)]


def cleveland(text):
    header = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach", "exang",
              "oldpeak", "slope", "ca", "thal", "class"]
    rows = []
    for r in split_comma(text):
        r[-1] = "0" if float(r[-1]) == 0 else "1"
        rows.append(r)
    return header, rows


def wdbc(text):
    stats = ["radius", "texture", "perimeter", "area", "smoothness", "compactness",
             "concavity", "concave_points", "symmetry", "fractal_dimension"]
    header = [f"{s}_{k}" for k in ("mean", "se", "worst") for s in stats] + ["class"]
    return header, [r[2:] + [r[1]] for r in split_comma(text)]


def haberman(text):
    return ["age", "year", "nodes", "class"], split_comma(text)


def iris(text):
    header = ["sepal_length", "sepal_width", "petal_length", "petal_width", "class"]
    return header, split_comma(text)


def winequality(text):
    reader = csv.reader(io.StringIO(text), delimiter=";")
    names = next(reader)
    header = [n.strip().replace(" ", "_") for n in names[:-1]] + ["class"]
    rows = [r[:-1] + ["1" if int(r[-1]) > 5 else "0"] for r in reader if r]
    return header, rows


# name: (relative URL, converter, extra `oksvm cv` flags)
DATASETS = {
    "banknote": ("00267/data_banknote_authentication.txt", banknote, "--positive-label 1"),
    "breast-cancer": ("breast-cancer-wisconsin/breast-cancer-wisconsin.data", breast_cancer,
                      "--positive-label 4"),
    "cleveland": ("heart-disease/processed.cleveland.data", cleveland, "--positive-label 1"),
    "wdbc": ("breast-cancer-wisconsin/wdbc.data", wdbc, "--positive-label M"),
    "haberman": ("haberman/haberman.data", haberman, "--positive-label 1"),
    "iris": ("iris/iris.data", iris,
             "--positive-label Iris-virginica --keep-labels Iris-versicolor,Iris-virginica"),
    "winequality-red": ("wine-quality/winequality-red.csv", winequality, "--positive-label 1"),
}


def fetch(relative, raw_dir):
    if raw_dir is not None:
        return (raw_dir / Path(relative).name).read_text()
    with urllib.request.urlopen(BASE + relative, timeout=60) as response:
        return response.read().decode("utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("names", nargs="*", help="datasets to fetch (default: all): " + ", ".join(sorted(DATASETS)))
    parser.add_argument("--out", type=Path, default=Path("data"))
    parser.add_argument("--raw-dir", type=Path, help="read raw files from here instead of downloading")
    args = parser.parse_args()
    unknown = [n for n in args.names if n not in DATASETS]
    if unknown:
        parser.error("unknown dataset: " + ", ".join(unknown))

    args.out.mkdir(parents=True, exist_ok=True)
    failed = False
    for name in args.names or sorted(DATASETS):
        relative, convert, flags = DATASETS[name]
        try:
            header, rows = convert(fetch(relative, args.raw_dir))
        except (OSError, ValueError) as error:
            print(f"{name}: {error}", file=sys.stderr)
            failed = True
            continue
        rows = [r for r in rows if len(r) == len(header) and "?" not in r]
        path = args.out / f"{name}.csv"
        with path.open("w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        print(f"{path}: {len(rows)} rows")
        print(f"  oksvm cv --data {path} --label-column class {flags}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
