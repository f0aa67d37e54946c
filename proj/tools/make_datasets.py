"""Writes the bundled datasets under data/. Deterministic."""
import pathlib

import numpy as np
from sklearn.datasets import load_breast_cancer

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def write_libsvm(path, x, y):
    with open(path, "w") as f:
        for row, label in zip(x, y):
            feats = " ".join(f"{j + 1}:{v:.10g}" for j, v in enumerate(row) if v != 0)
            f.write(f"{int(label)} {feats}\n")


def breast_cancer():
    ds = load_breast_cancer()
    y = np.where(ds.target == 1, 1, -1)
    write_libsvm(OUT / "breast_cancer.libsvm", ds.data, y)


def synthetic_logistic(n=3000, d=8, seed=20240611):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, d))
    w = rng.normal(size=d)
    w /= np.linalg.norm(w) / 2.0
    eta = 1.0 / (1.0 + np.exp(-(x @ w + 0.5 * np.sin(2.0 * x[:, 0]))))
    y = np.where(rng.uniform(size=n) < eta, 1, -1)
    with open(OUT / "synthetic_logistic.csv", "w") as f:
        f.write(",".join([f"x{j}" for j in range(d)] + ["label"]) + "\n")
        for row, label in zip(x, y):
            f.write(",".join(f"{v:.10g}" for v in row) + f",{label}\n")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    breast_cancer()
    synthetic_logistic()
