#!/usr/bin/env python3
"""Regenerate the bundled CSV datasets under data/.

All files are deterministic: noisy variants use fixed numpy seeds, so
re-running this script reproduces the committed files byte for byte.
"""

import io
from pathlib import Path

import numpy as np
from sklearn.datasets import load_iris, load_wine

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def write_csv(name: str, columns, rows) -> None:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format(v, ".17g") for v in row) + "\n")
    (DATA_DIR / name).write_text(buf.getvalue())
    print(f"wrote data/{name} ({len(rows)} rows x {len(columns)} cols)")


def attribute_noise(rows: np.ndarray, rate: float, seed: int) -> np.ndarray:
    """Replace a `rate` fraction of cells with uniform draws from the
    column's observed range (attribute noise; rows keep their length)."""
    rs = np.random.RandomState(seed)
    lo = rows.min(axis=0)
    hi = rows.max(axis=0)
    noisy = rows.copy()
    mask = rs.rand(*rows.shape) < rate
    repl = lo + rs.rand(*rows.shape) * (hi - lo)
    noisy[mask] = np.round(repl[mask], 6)
    return noisy


def main() -> None:
    DATA_DIR.mkdir(exist_ok=True)

    iris = load_iris()
    iris_cols = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    write_csv("iris.csv", iris_cols, iris.data)
    for pct, seed in ((5, 101), (10, 102), (20, 103)):
        write_csv(f"iris-{pct}an-nn.csv", iris_cols,
                  attribute_noise(iris.data, pct / 100.0, seed))

    wine = load_wine()
    wine_cols = [c.replace("/", "_") for c in wine.feature_names]
    write_csv("wine.csv", wine_cols, wine.data)
    write_csv("wine-5an-nn.csv", wine_cols, attribute_noise(wine.data, 0.05, 201))

    # full 5^4 factorial over the four balance attributes (class column dropped)
    grid = np.array([[a, b, c, d]
                     for a in range(1, 6) for b in range(1, 6)
                     for c in range(1, 6) for d in range(1, 6)], dtype=float)
    balance_cols = ["left_weight", "left_distance", "right_weight", "right_distance"]
    write_csv("balance-scale.csv", balance_cols, grid)
    write_csv("balance-noise.csv", balance_cols, attribute_noise(grid, 0.20, 301))


if __name__ == "__main__":
    main()
