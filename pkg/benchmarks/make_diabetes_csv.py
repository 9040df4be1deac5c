"""Write the 442 x 10 diabetes data (Efron et al. 2004) as a CSV for ``hs``.

Uses the unscaled copy bundled with scikit-learn. Column order:
AGE,SEX,BMI,BP,S1,S2,S3,S4,S5,S6,Y. Verify against data/diabetes.sha256.
"""
import hashlib
import sys

from sklearn.datasets import load_diabetes

COLUMNS = ["AGE", "SEX", "BMI", "BP", "S1", "S2", "S3", "S4", "S5", "S6", "Y"]


def main(path):
    d = load_diabetes(scaled=False)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(COLUMNS) + "\n")
        for row, target in zip(d.data, d.target):
            fh.write(",".join(repr(float(v)) for v in row) + f",{float(target)!r}\n")
    print(hashlib.sha256(open(path, "rb").read()).hexdigest())


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "diabetes.csv")
