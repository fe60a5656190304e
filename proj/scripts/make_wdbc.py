"""Write data/wdbc.data in the UCI layout from scikit-learn's bundled copy.

scikit-learn ships the same 569x30 table but without the sample IDs, so the
ID column is filled with the 1-based row number.
"""
import csv
import pathlib

import sklearn

src = pathlib.Path(sklearn.__file__).parent / "datasets" / "data" / "breast_cancer.csv"
dst = pathlib.Path(__file__).resolve().parent.parent / "data" / "wdbc.data"

with src.open() as fin, dst.open("w", newline="") as fout:
    rows = csv.reader(fin)
    next(rows)  # "569,30,malignant,benign"
    for i, row in enumerate(rows, start=1):
        *features, target = row
        diagnosis = "M" if target == "0" else "B"
        fout.write(",".join([str(i), diagnosis, *features]) + "\n")
