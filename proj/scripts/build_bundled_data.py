#!/usr/bin/env python3
"""Build the bundled UK-shaped 55-industry dataset in data/uk55.

The published tables give industry shares, shocks, inventory ratios and
criticality counts but not the flow matrix itself. This script rebuilds a
consistent flow matrix from those aggregates so the simulator has a
realistic, fully specified calibration to run on.
"""
import argparse
import pathlib
import re

import networkx as nx
import numpy as np

ROOT = pathlib.Path(__file__).resolve().parents[1]

ONSITE = {"G45", "G47", "H49", "H50", "H51", "H52", "H53", "I", "L68",
          "M69_M70", "O84", "P85", "R_S", "T"}

# intermediate-input share of gross output and labour share, by section
SECTION_SHARES = {
    "A": (0.55, 0.15), "B": (0.45, 0.12), "C": (0.65, 0.17), "D": (0.70, 0.08),
    "E": (0.50, 0.22), "F": (0.55, 0.24), "G": (0.42, 0.30), "H": (0.50, 0.28),
    "I": (0.45, 0.34), "J": (0.45, 0.28), "K": (0.40, 0.26), "L": (0.20, 0.05),
    "M": (0.40, 0.38), "N": (0.40, 0.42), "O": (0.45, 0.40), "P": (0.25, 0.62),
    "Q": (0.35, 0.52), "R": (0.40, 0.36), "T": (0.00, 0.95),
}

TOTAL_X = 3400e3 / 365.0  # GBP million per day
TOTAL_C = 900e3 / 365.0
TOTAL_F = 1000e3 / 365.0
M_SHARE = 0.82
SECTION_BOOST = 4.0
WORKER_SHARE = 0.62

# illustrative exposure / proximity indices (0-100)
EPI_SECTION = {
    "A": (25, 50), "B": (30, 55), "C": (25, 55), "D": (20, 45), "E": (35, 55),
    "F": (30, 65), "G": (25, 55), "H": (30, 60), "I": (35, 70), "J": (10, 40),
    "K": (10, 45), "L": (15, 45), "M": (15, 45), "N": (25, 50), "O": (30, 55),
    "P": (35, 70), "Q": (85, 80), "R": (40, 65), "T": (30, 60),
}
EPI_OVERRIDE = {"G47": (35, 65), "H51": (45, 75), "M75": (55, 70)}

PLACES = [
    ("Work", "work", 21.20, 7.60, 20.00, 55.80),
    ("Pre-school", "school", 8.60, 7.60, 20.00, 73.30),
    ("School", "school", 12.00, 7.60, 20.00, 71.10),
    ("Convenience store", "consume", 5.20, 0.40, 10.00, 8.30),
    ("Large store", "consume", 24.10, 0.80, 21.50, 18.00),
    ("Restaurant", "consume", 9.40, 1.40, 30.00, 30.80),
    ("Sports venue", "consume", 11.50, 2.30, 34.50, 53.80),
    ("Public transport", "transport", 16.30, 1.00, 40.00, 8.30),
    ("Home", "home", 95.00, 18.40, 1.00, 73.70),
    ("Car", "home", 58.70, 0.90, 1.00, 25.80),
    ("Public urban space", "home", 6.60, 1.80, 20.00, 28.30),
    ("Friends and relatives", "home", 21.00, 5.10, 3.00, 80.10),
]
PLACE_INDUSTRY = {"Convenience store": "G47", "Large store": "G47",
                  "Restaurant": "I", "Sports venue": "R_S"}


def table_block(text, first_row):
    start = text.index(first_row)
    end = text.index("\\hline", start)
    rows = []
    for line in text[start:end].split("\\\\"):
        line = line.strip().replace("\\&", "and")
        if not line:
            continue
        parts = [p.strip() for p in line.split("&")]
        parts[0] = parts[0].replace("\\_", "_")
        rows.append(parts)
    return rows


def num(s):
    s = s.replace("$", "").replace("{", "").replace("}", "").strip()
    return float(s) if s not in ("", "-") else 0.0


def parse_tables(paper):
    t7 = []
    for p in table_block(paper, "A01 & Agriculture & 0.8"):
        t7.append(dict(code=p[0], name=p[1], x=num(p[2]), eps_s=num(p[3]),
                       rli=num(p[4]), ess=num(p[5]), c=num(p[6]),
                       eps_d=num(p[7]), f=num(p[8]), f_shock=num(p[9])))
    t9 = {}
    for p in table_block(paper, "A01 & Agriculture & 4 & 2"):
        v = [int(q) for q in p[2:10]]
        t9[p[0]] = dict(row=v[0:4], col=v[4:8])
    t13 = {}
    for p in table_block(paper, "A01 & Crop and animal"):
        if p[-1]:
            t13[p[0]] = num(p[-1])
    return t7, t9, t13


def place(mask_free, row_cap, col_cap, cost, pref=None):
    """Max-flow / min-cost placement of cells honouring row and column caps."""
    n = len(row_cap)
    g = nx.DiGraph()
    for i in range(n):
        g.add_edge("s", ("r", i), capacity=int(row_cap[i]), weight=0)
        g.add_edge(("c", i), "t", capacity=int(col_cap[i]), weight=0)
    for i in range(n):
        for j in range(n):
            if mask_free[i, j]:
                w = int(cost[i, j])
                if pref is not None and pref[i, j]:
                    w -= 10000
                g.add_edge(("r", i), ("c", j), capacity=1, weight=w)
    flow = nx.max_flow_min_cost(g, "s", "t")
    out = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for (_, j), f in flow[("r", i)].items():
            if f:
                out[i, j] = True
    return out


def natural_affinity(codes, r, s, rng):
    """Gravity-style flow propensity: big sellers to big buyers, within-section boost."""
    n = len(codes)
    aff = np.outer(r, s) * np.exp(rng.normal(0.0, 0.6, size=(n, n)))
    sec = np.array([section(k) for k in codes])
    aff[sec[:, None] == sec[None, :]] *= SECTION_BOOST
    aff[np.arange(n), np.arange(n)] *= 6.0
    return aff


def build_criticality(codes, t9, affinity):
    n = len(codes)
    rows = np.array([t9[c]["row"] for c in codes])
    cols = np.array([t9[c]["col"] for c in codes])
    ratings = np.zeros((n, n))
    na = np.zeros((n, n), dtype=bool)
    free = np.ones((n, n), dtype=bool)
    # analysts rate an industry's large inputs as critical: cheaper cost for larger flows
    share = affinity / np.maximum(affinity.sum(0, keepdims=True), 1e-300)
    cost = np.round(-100.0 * np.log(np.maximum(share, 1e-12))).astype(int)
    diag = np.eye(n, dtype=bool)
    t = codes.index("T")
    diag[t, t] = False
    free[:, t] = cols[t, 0] + cols[t, 1] + cols[t, 3] > 0
    for k, val in ((0, 1.0), (1, 0.5), (3, None)):
        pref = diag if k == 0 else None
        sel = place(free, rows[:, k], cols[:, k], cost, pref)
        if val is None:
            na |= sel
        else:
            ratings[sel] = val
        free &= ~sel
    return ratings, na, rows, cols


def ras(seed, row_t, col_t, iters=5000):
    z = seed.copy()
    for _ in range(iters):
        rs = z.sum(1)
        z *= np.where(rs > 0, row_t / np.where(rs > 0, rs, 1), 0)[:, None]
        cs = z.sum(0)
        z *= np.where(cs > 0, col_t / np.where(cs > 0, cs, 1), 0)[None, :]
        if np.abs(z.sum(1) - row_t).max() < 1e-10 * row_t.max():
            break
    return z


def section(code):
    return code[0]


def base_vectors(t7):
    codes = [r["code"] for r in t7]
    xs = np.array([max(r["x"], 0.05) for r in t7])
    cs = np.array([max(r["c"], 0.02) for r in t7])
    fs = np.array([max(r["f"], 0.02) for r in t7])
    x = xs / xs.sum() * TOTAL_X
    c = cs / cs.sum() * TOTAL_C
    f = fs / fs.sum() * TOTAL_F
    t = codes.index("T")
    # households as employers sell nothing to industries
    x = np.maximum(x, (c + f) / 0.95)
    x[t] = c[t] + f[t]
    r = x - c - f
    alpha = np.array([SECTION_SHARES[section(k)][0] for k in codes])
    alpha *= r.sum() / (alpha * x).sum()
    return codes, x, c, f, r, alpha * x


def build_io(codes, x, c, f, r, s, affinity, ratings):
    t = codes.index("T")
    seed = affinity * (1.0 + 3.0 * (ratings == 1.0) + 1.0 * (ratings == 0.5))
    seed[:, t] = 0.0
    z = ras(seed, r, s)
    x = z.sum(1) + c + f
    lab = np.array([SECTION_SHARES[section(k)][1] for k in codes])
    l = lab * x
    l *= (c.sum() / M_SHARE) / l.sum()
    rest = x - z.sum(0) - l
    e = np.maximum(0.3 * rest, 0.0)
    return codes, z, x, c, f, l, e


def fmt(v):
    return repr(float(v))


def write_all(out, t7, t13, ratings, na, rows, cols, io):
    codes, z, x, c, f, l, e = io
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "io_table.csv", "w") as fh:
        fh.write("code," + ",".join(codes) + "\n")
        for i, k in enumerate(codes):
            fh.write(k + "," + ",".join(fmt(v) for v in z[i]) + "\n")
        for lab, vec in (("x", x), ("c", c), ("f", f), ("l", l), ("e", e)):
            fh.write(lab + "," + ",".join(fmt(v) for v in vec) + "\n")
    with open(out / "criticality.csv", "w") as fh:
        fh.write("input," + ",".join(codes) + "\n")
        for i, k in enumerate(codes):
            cells = []
            for j in range(len(codes)):
                if na[i, j]:
                    cells.append("NA")
                else:
                    v = ratings[i, j]
                    cells.append("1" if v == 1 else "0.5" if v == 0.5 else "0")
            fh.write(k + "," + ",".join(cells) + "\n")
    with open(out / "criticality_counts.csv", "w") as fh:
        fh.write("code,row_critical,row_important,row_noncritical,row_na,"
                 "col_critical,col_important,col_noncritical,col_na\n")
        for i, k in enumerate(codes):
            fh.write(k + "," + ",".join(str(v) for v in list(rows[i]) + list(cols[i])) + "\n")
    with open(out / "shocks.csv", "w") as fh:
        fh.write("code,eps_S_pct,rli,ess_w,eps_D_pct,f_shock_pct,onsite\n")
        for r in t7:
            fh.write(f"{r['code']},{r['eps_s']:g},{r['rli']:g},{r['ess']:g},"
                     f"{r['eps_d']:g},{r['f_shock']:g},{int(r['code'] in ONSITE)}\n")
    with open(out / "epi_places.csv", "w") as fh:
        fh.write("place,category,visit_pct,duration_h,crowd,physical_pct,industry\n")
        for p in PLACES:
            fh.write(f"{p[0]},{p[1]},{p[2]:.2f},{p[3]:.2f},{p[4]:.2f},{p[5]:.2f},"
                     f"{PLACE_INDUSTRY.get(p[0], '')}\n")
    # no employment column is tabulated; gross-output shares stand in for employment shares
    xs = np.array([r["x"] for r in t7])
    eta = xs / xs.sum() * WORKER_SHARE
    with open(out / "epi_industry.csv", "w") as fh:
        fh.write("code,exposure,proximity,eta\n")
        for i, k in enumerate(codes):
            ex, pr = EPI_OVERRIDE.get(k, EPI_SECTION[section(k)])
            fh.write(f"{k},{ex},{pr},{fmt(eta[i])}\n")
    with open(out / "inventory_ratios.csv", "w") as fh:
        fh.write("code,ratio_monthly\n")
        for k in codes:
            fh.write(f"{k},{t13[k]:.2f}\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paper", default=str(ROOT / "paper.md"))
    ap.add_argument("--out", default=str(ROOT / "data" / "uk55"))
    ap.add_argument("--seed", type=int, default=2020)
    a = ap.parse_args()
    paper = pathlib.Path(a.paper).read_text()
    t7, t9, t13 = parse_tables(paper)
    codes = [r["code"] for r in t7]
    missing = [k for k in codes if k not in t9 or k not in t13]
    if missing:
        raise SystemExit(f"missing rows: {missing}")
    rng = np.random.default_rng(a.seed)
    codes, x, c, f, r, s = base_vectors(t7)
    affinity = natural_affinity(codes, r, s, rng)
    ratings, na, rows, cols = build_criticality(codes, t9, affinity)
    io = build_io(codes, x, c, f, r, s, affinity, ratings)
    write_all(pathlib.Path(a.out), t7, t13, ratings, na, rows, cols, io)


if __name__ == "__main__":
    main()
