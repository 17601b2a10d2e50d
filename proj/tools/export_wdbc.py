#!/usr/bin/env python3
"""Write data/wdbc.data in the UCI diagnostic layout (id, M/B, 30 features).

The source is the copy of the Breast Cancer Wisconsin (Diagnostic) table that
ships with scikit-learn. That copy drops the patient id column, so the id
written here is the 1-based row index; the loader ignores it.
"""
import csv
import os
import sys

import sklearn


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "data", "wdbc.data")
    src = os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data",
                       "breast_cancer.csv")
    with open(src, newline="") as fin, open(out, "w", newline="") as fout:
        reader = csv.reader(fin)
        next(reader)  # "569,30,malignant,benign"
        for i, row in enumerate(reader, start=1):
            # sklearn target: 0 = malignant, 1 = benign
            diagnosis = "M" if row[-1] == "0" else "B"
            fout.write(",".join([str(i), diagnosis] + row[:-1]) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
