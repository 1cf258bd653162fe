"""Regenerates the synthetic survey fixtures in this directory.

students.csv     40 respondents x 18 simple attributes, a few blanks.
                 Custom mash up / Result as Mash up are tuned so their
                 correlation after imputation and aggregation is 0.139.
populations.csv  Students / Lecturers / Professionals with a label column.
"""
import csv
import json
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
SCHEMA = json.loads((HERE / "schema.json").read_text())

SIMPLE = [
    "Multilingual", "Semantic Maps", "Semantic Wiki", "E decisions", "Software Agents",
    "2D Videos", "Screen Partial 2D and Partial 3D",
    "3D text", "3D screen", "3D demo", "3D tutorial website",
    "Speech recognition", "Audio", "Custom mash up",
    "Mash up", "Mash up of results", "Mash up of tutorial websites",
    "Mash up of Social networking sites",
]


def members(name):
    return SCHEMA["composites"].get(name, [name])


def composite_frame(cells):
    """cells: dict simple -> float array with nan for missing."""
    out = {}
    imputed = {}
    for k, v in cells.items():
        v = v.copy()
        v[np.isnan(v)] = np.nanmean(v)
        imputed[k] = v
    for group in SCHEMA["groups"].values():
        for c in group:
            out[c] = np.mean([imputed[s] for s in members(c)], axis=0)
    return out


def likert(x):
    return np.clip(np.rint(x), 1, 5)


def students(rng, n=40):
    apps = rng.normal(0, 1, n)
    media = rng.normal(0, 1, n)
    out_f = rng.normal(0, 1, n)
    cells = {}
    for s in SIMPLE[:5]:
        cells[s] = likert(3.6 + 0.8 * apps + rng.normal(0, 0.8, n))
    for s in SIMPLE[5:11]:
        cells[s] = likert(3.2 + 0.9 * media + rng.normal(0, 0.7, n))
    cells["Speech recognition"] = likert(3.0 - 0.6 * media + rng.normal(0, 1.0, n))
    cells["Audio"] = likert(3.3 + 0.9 * media + rng.normal(0, 0.8, n))
    cells["Custom mash up"] = likert(3.0 + 0.3 * out_f + rng.normal(0, 1.0, n))
    for s in SIMPLE[14:]:
        cells[s] = likert(3.1 + 0.5 * out_f + rng.normal(0, 0.9, n))
    # sparse missingness outside the tuned pair
    for s in ["Semantic Wiki", "3D demo", "Audio", "Mash up of results"]:
        idx = rng.choice(n, 2, replace=False)
        cells[s][idx] = np.nan

    target = 0.139

    def r_now():
        f = composite_frame(cells)
        return np.corrcoef(f["Custom mash up"], f["Result as Mash up"])[0, 1]

    tuned = ["Custom mash up"] + SIMPLE[14:]
    for _ in range(20000):
        r = r_now()
        if abs(r - target) < 1e-4:
            break
        col = cells[tuned[rng.integers(len(tuned))]]
        i = rng.integers(n)
        old = col[i]
        if np.isnan(old):
            continue
        col[i] = np.clip(old + rng.choice([-1, 1]), 1, 5)
        if abs(r_now() - target) >= abs(r - target):
            col[i] = old
    return cells, r_now()


def write(path, ids, cells, labels=None):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["respondent_id"] + (["population"] if labels is not None else []) + SIMPLE
        w.writerow(header)
        for i, rid in enumerate(ids):
            row = [rid] + ([labels[i]] if labels is not None else [])
            for s in SIMPLE:
                v = cells[s][i]
                row.append("" if np.isnan(v) else str(int(v)))
            w.writerow(row)


def main():
    rng = np.random.default_rng(20100301)
    cells, r = students(rng)
    write(HERE / "students.csv", [f"S{i + 1:02d}" for i in range(40)], cells)
    print(f"students.csv: r(Custom mash up, Result as Mash up) = {r:.6f}")

    ids, labels, rows = [], [], {s: [] for s in SIMPLE}
    centers = {"Students": (4.2, 3.4, 2.9), "Lecturers": (3.0, 4.1, 3.2), "Professionals": (3.1, 2.8, 4.3)}
    for pop, (a, m, o) in centers.items():
        n = 30
        for s in SIMPLE:
            g = a if s in SIMPLE[:5] else (o if s in SIMPLE[13:] else m)
            rows[s].append(likert(g + rng.normal(0, 0.9, n)))
        ids += [f"{pop[0]}{i + 1:02d}" for i in range(n)]
        labels += [pop] * n
    cells = {s: np.concatenate(v) for s, v in rows.items()}
    cells["Audio"][[3, 47]] = np.nan
    write(HERE / "populations.csv", ids, cells, labels)


if __name__ == "__main__":
    main()
