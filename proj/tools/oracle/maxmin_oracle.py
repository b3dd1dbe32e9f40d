#!/usr/bin/env python3
"""Brute-force max-min fair multipath allocation (reference oracle).

Path formulation over every simple path, solved with HiGHS. Each round
maximizes the common level t of the unfrozen demands, then probes every
unfrozen demand on its own: if it cannot exceed t while the others keep t,
it is frozen at t. This is independent of the C++ node-link solver (no
max-flow probes, no residual graphs, no in-repo simplex).

  maxmin_oracle.py corpus --out tests/data/maxmin_corpus.yaml
  maxmin_oracle.py solve problem.yaml
  maxmin_oracle.py annotate problem.yaml --out fixture.yaml
"""

import argparse
import itertools
import math
import random
import sys

import networkx as nx
import numpy as np
import yaml
from scipy.optimize import linprog

def simple_paths(links, src, dst):
    g = nx.DiGraph()
    for i, (a, b, _) in enumerate(links):
        g.add_edge(a, b, index=i)
    if src not in g or dst not in g:
        return []
    out = []
    for nodes in nx.all_simple_paths(g, src, dst):
        out.append([g[a][b]["index"] for a, b in zip(nodes, nodes[1:])])
    return out


def _lp(c, a_ub, b_ub, a_eq, b_eq):
    res = linprog(
        c,
        A_ub=a_ub if len(a_ub) else None,
        b_ub=b_ub if len(b_ub) else None,
        A_eq=a_eq if len(a_eq) else None,
        b_eq=b_eq if len(b_eq) else None,
        bounds=[(0, None)] * len(c),
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise RuntimeError(f"LP failed: {res.message}")
    return res


def maxmin(links, demands):
    """links: [(src, dst, cap)], demands: [(src, dst, peak or inf)] -> totals."""
    paths = [simple_paths(links, s, d) for s, d, _ in demands]
    if any(not p for p in paths):
        raise ValueError("unroutable demand")
    cols = [(i, p) for i, ps in enumerate(paths) for p in ps]
    nvar = len(cols) + 1  # last var is t
    scale = max(c for _, _, c in links)

    def demand_row(i):
        row = np.zeros(nvar)
        for j, (owner, _) in enumerate(cols):
            if owner == i:
                row[j] = 1.0
        return row

    cap_rows, cap_rhs = [], []
    for l, (_, _, c) in enumerate(links):
        row = np.zeros(nvar)
        for j, (_, p) in enumerate(cols):
            if l in p:
                row[j] = 1.0
        cap_rows.append(row)
        cap_rhs.append(c / scale)
    peak_rows, peak_rhs = [], []
    for i, (_, _, pk) in enumerate(demands):
        if math.isfinite(pk):
            peak_rows.append(demand_row(i))
            peak_rhs.append(pk / scale)

    frozen = {}
    n = len(demands)
    while len(frozen) < n:
        active = [i for i in range(n) if i not in frozen]

        def constraints(level, probe=None):
            a_ub, b_ub = list(cap_rows) + list(peak_rows), list(cap_rhs) + list(peak_rhs)
            a_eq, b_eq = [], []
            for i, v in frozen.items():
                a_eq.append(demand_row(i))
                b_eq.append(v)
            for i in active:
                row = -demand_row(i)
                if level is None:
                    row[-1] = 1.0  # t - x_i <= 0
                    a_ub.append(row)
                    b_ub.append(0.0)
                elif i != probe:
                    a_ub.append(row)
                    b_ub.append(-level)
            return np.array(a_ub), np.array(b_ub), np.array(a_eq), np.array(b_eq)

        c = np.zeros(nvar)
        c[-1] = -1.0
        res = _lp(c, *constraints(None))
        t = res.x[-1]
        newly = []
        for i in active:
            c = -demand_row(i)
            a_ub, b_ub, a_eq, b_eq = constraints(t, probe=i)
            # t is unused in probes; pin it to 0.
            pin = np.zeros(nvar)
            pin[-1] = 1.0
            a_eq = np.vstack([a_eq, pin]) if len(a_eq) else pin[None, :]
            b_eq = np.append(b_eq, 0.0)
            res = _lp(c, a_ub, b_ub, a_eq, b_eq)
            if -res.fun <= t + 1e-7 * max(1.0, t):
                newly.append(i)
        if not newly:
            raise RuntimeError("no demand froze")
        for i in newly:
            frozen[i] = t
    return [float(frozen[i] * scale) for i in range(n)]


def _connected(nodes, links):
    g = nx.Graph()
    g.add_nodes_from(nodes)
    g.add_edges_from((a, b) for a, b, _ in links)
    return nx.is_connected(g)


def _instances(seed):
    """Seeded enumeration: every node count 2..5 and demand count 1..3 is
    covered, plus exhaustive capacity assignments on the directed triangle
    and the 2-node pair."""
    rng = random.Random(seed)
    out = []
    # 2 nodes, both directions, every capacity pair, 1..3 demands 1->2.
    for c1, c2 in itertools.product(range(1, 5), repeat=2):
        for nd in (1, 2, 3):
            links = [(1, 2, c1), (2, 1, c2)]
            dem = [(1, 2, math.inf) if k == 0 else (2, 1, math.inf) if k == 1 else (1, 2, 1.0)
                   for k in range(nd)]
            out.append(([1, 2], links, dem))
    # Triangle full mesh with the toy demands, every capacity on the two
    # one-hop links {1,2},{3,2} and the relay {1,3}.
    for a, b, c in itertools.product(range(1, 5), repeat=3):
        links = [(1, 2, a), (2, 1, a), (3, 2, b), (2, 3, b), (1, 3, c), (3, 1, c)]
        out.append(([1, 2, 3], links, [(1, 2, math.inf), (3, 2, math.inf)]))
    # Random directed graphs, 3..5 nodes.
    while len(out) < 260:
        n = rng.choice([3, 4, 4, 5, 5])
        nodes = list(range(1, n + 1))
        pairs = [(a, b) for a in nodes for b in nodes if a != b]
        density = rng.uniform(0.3, 0.8)
        links = [(a, b, rng.randint(1, 4)) for a, b in pairs if rng.random() < density]
        if not links or not _connected(nodes, links):
            continue
        nd = rng.randint(1, 3)
        dem = []
        for _ in range(nd):
            s, d = rng.sample(nodes, 2)
            if not simple_paths(links, s, d):
                break
            peak = rng.choice([math.inf, math.inf, 1.0, 2.0, 3.0, 0.5])
            dem.append((s, d, peak))
        if len(dem) != nd:
            continue
        out.append((nodes, links, dem))
    return out


def _fmt(x):
    return "inf" if math.isinf(x) else repr(float(x))


def write_corpus(path, seed):
    lines = ["# Max-min multipath reference totals from tools/oracle/maxmin_oracle.py",
             f"# seed {seed}. Capacities are plain integers (units are arbitrary).",
             "instances:"]
    for k, (nodes, links, dem) in enumerate(_instances(seed)):
        totals = maxmin(links, dem)
        lines.append(f"  - id: {k}")
        lines.append(f"    nodes: [{', '.join(map(str, nodes))}]")
        lines.append("    links:")
        for a, b, c in links:
            lines.append(f"      - {{src: {a}, dst: {b}, capacity_bps: {c}}}")
        lines.append("    demands:")
        for i, (s, d, p) in enumerate(dem):
            lines.append(f"      - {{id: {i + 1}, src: {s}, dst: {d}, peak: {_fmt(p)}}}")
        lines.append(f"    expected: [{', '.join(repr(t) for t in totals)}]")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {k + 1} instances to {path}")


def _peak(v):
    if v is None:
        return math.inf
    if isinstance(v, list):
        if len(v) != 1 or float(v[0][0]) != 0.0:
            raise ValueError("time-varying peaks are not supported here")
        v = v[0][1]
    if isinstance(v, str):
        return float(v.replace(".inf", "inf"))
    return float(v)


def _solve_doc(path):
    doc = yaml.safe_load(open(path))
    links = [(l["src"], l["dst"], float(l["capacity_bps"])) for l in doc["links"]]
    dem = [(d["src"], d["dst"], _peak(d.get("peak"))) for d in doc["demands"]]
    return doc, maxmin(links, dem)


def solve_document(path):
    doc, totals = _solve_doc(path)
    print("demand_id,rate_bps")
    for d, t in zip(doc["demands"], totals):
        print(f"{d['id']},{t!r}")


def annotate_document(path, out):
    """Copies a problem document into a one-instance corpus with totals."""
    _, totals = _solve_doc(path)
    body = open(path).read().rstrip("\n").splitlines()
    lines = ["# Reference totals from tools/oracle/maxmin_oracle.py annotate", "instances:",
             "  - id: 0"]
    lines += ["    " + l for l in body]
    lines.append(f"    expected: [{', '.join(repr(t) for t in totals)}]")
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawTextHelpFormatter)
    sub = ap.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("corpus")
    c.add_argument("--out", required=True)
    c.add_argument("--seed", type=int, default=20240601)
    s = sub.add_parser("solve")
    s.add_argument("problem")
    a = sub.add_parser("annotate")
    a.add_argument("problem")
    a.add_argument("--out", required=True)
    args = ap.parse_args()
    if args.cmd == "corpus":
        write_corpus(args.out, args.seed)
    elif args.cmd == "annotate":
        annotate_document(args.problem, args.out)
    else:
        solve_document(args.problem)


if __name__ == "__main__":
    sys.exit(main())
