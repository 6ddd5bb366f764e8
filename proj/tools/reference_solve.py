#!/usr/bin/env python3
"""Re-solve a dumped canonical conic program with cvxpy and print the result as JSON."""

import argparse
import json
import sys

import cvxpy as cp
import numpy as np
import scipy.sparse as sp


def read_program(path):
    with open(path) as fh:
        tokens = fh.read().split()
    pos = 0

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def expect(word):
        got = take()
        if got != word:
            raise ValueError(f"expected {word!r}, got {got!r}")

    expect("secisac-conic")
    if int(take()) != 1:
        raise ValueError("unsupported dump version")
    expect("vars")
    nvars, n = int(take()), int(take())
    for _ in range(nvars):
        expect("var")
        for _ in range(5):
            take()
    expect("sense")
    maximize = take() == "maximize"
    expect("objective_constant")
    const = float(take())
    expect("objective")
    c = np.zeros(n)
    for _ in range(int(take())):
        i = int(take())
        c[i] = float(take())
    expect("blocks")
    blocks = []
    for _ in range(int(take())):
        expect("block")
        cone, off, dim, psd_n = take(), int(take()), int(take()), int(take())
        tag, label = take(), take()
        blocks.append((cone, off, dim, psd_n, tag, label))
    expect("rows")
    m = int(take())
    expect("F")
    nnz = int(take())
    rows, cols, vals = [], [], []
    for _ in range(nnz):
        rows.append(int(take()))
        cols.append(int(take()))
        vals.append(float(take()))
    expect("g")
    g = np.array([float(take()) for _ in range(m)])
    expect("end")
    f = sp.csr_matrix((vals, (rows, cols)), shape=(m, n))
    return dict(n=n, maximize=maximize, const=const, c=c, blocks=blocks, f=f, g=g)


def solve(prog, solver, tol=None):
    x = cp.Variable(prog["n"])
    s = prog["f"] @ x + prog["g"]
    cons = []
    for cone, off, dim, psd_n, _tag, _label in prog["blocks"]:
        blk = s[off:off + dim]
        if cone == "zero":
            cons.append(blk == 0)
        elif cone == "nonneg":
            cons.append(blk >= 0)
        elif cone == "soc":
            cons.append(cp.SOC(blk[0], blk[1:]))
        elif cone == "exp":
            cons.append(cp.ExpCone(blk[0], blk[1], blk[2]))
        elif cone == "psd":
            mat = cp.reshape(blk, (psd_n, psd_n), order="F")
            cons.append(0.5 * (mat + mat.T) >> 0)
        else:
            raise ValueError(f"unknown cone {cone}")
    obj = prog["c"] @ x + prog["const"]
    problem = cp.Problem(cp.Maximize(obj) if prog["maximize"] else cp.Minimize(obj), cons)
    opts = {}
    if tol is not None and solver == "CLARABEL":
        opts = dict(tol_gap_abs=tol, tol_gap_rel=tol, tol_feas=tol)
    problem.solve(solver=solver, **opts)
    return problem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dump")
    ap.add_argument("--solver", default="CLARABEL")
    ap.add_argument("--tol", type=float, default=1e-7, help="gap and feasibility tolerance (Clarabel only)")
    ap.add_argument("--max-tol", type=float, default=1e-6, help="loosest tolerance tried after a stalled solve")
    args = ap.parse_args()
    prog = read_program(args.dump)
    tol = args.tol
    problem = solve(prog, args.solver, tol)
    # Clarabel can stall just short of a tight gap; loosen step by step down to --max-tol
    while problem.status == cp.OPTIMAL_INACCURATE and args.solver == "CLARABEL" and tol * 10 <= args.max_tol * (1 + 1e-12):
        tol *= 10
        problem = solve(prog, args.solver, tol)
    value = problem.value
    out = {
        "status": problem.status,
        "objective": None if value is None or not np.isfinite(value) else float(value),
        "solver": args.solver,
        "tol": tol,
    }
    json.dump(out, sys.stdout)
    sys.stdout.write("\n")
    return 0 if problem.status == cp.OPTIMAL else 1


if __name__ == "__main__":
    sys.exit(main())
