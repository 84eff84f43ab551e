#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) problem and write a CSDP-style solution.

Usage: sdpa_solve.py PROBLEM.dat-s SOLUTION.sol

The problem is read in CSDP's primal form

    maximize tr(C X)  subject to  tr(A_i X) = a_i,  X psd,

and solved with cvxpy (Clarabel by default, override with TURAN_CVXPY_SOLVER).
The output follows CSDP's layout: the dual vector y on the first line, then
`1 block i j value` lines for Z = sum_i y_i A_i - C and `2 block i j value`
lines for X, upper triangle only.

Exit status: 0 on an optimal (or near-optimal) solve, 1 otherwise.
"""

import re
import sys
import os

import numpy as np
import scipy.sparse as sp
import cvxpy as cp


def read_problem(path):
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and ln[0] not in '"*']
    tokens = re.split(r"[\s,{}()]+", " ".join(lines).strip())
    pos = 0

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    m = int(take())
    nblocks = int(take())
    sizes = [int(take()) for _ in range(nblocks)]
    rhs = np.array([float(take()) for _ in range(m)])
    entries = []
    while pos + 5 <= len(tokens):
        mat, blk, i, j = (int(take()) for _ in range(4))
        entries.append((mat, blk - 1, i - 1, j - 1, float(take())))
    return m, sizes, rhs, entries


def main(argv):
    if len(argv) != 3:
        print(__doc__.strip().splitlines()[2], file=sys.stderr)
        return 2
    m, sizes, rhs, entries = read_problem(argv[1])
    dims = [abs(s) for s in sizes]

    # Coefficients of every matrix on every block, as sparse rows over
    # vec(X_b) (column-major, symmetric positions both filled).
    rows = {b: ([], [], []) for b in range(len(sizes))}
    objective = {b: ([], []) for b in range(len(sizes))}
    for mat, b, i, j, v in entries:
        n = dims[b]
        if sizes[b] < 0:
            positions = [i]
        else:
            positions = [i + j * n] if i == j else [i + j * n, j + i * n]
        for p in positions:
            if mat == 0:
                objective[b][0].append(p)
                objective[b][1].append(v)
            else:
                rows[b][0].append(mat - 1)
                rows[b][1].append(p)
                rows[b][2].append(v)

    variables = []
    constraints = []
    lhs = 0
    obj = 0
    for b, s in enumerate(sizes):
        n = dims[b]
        if s < 0:
            x = cp.Variable(n, nonneg=True)
            flat = x
            length = n
        else:
            x = cp.Variable((n, n), symmetric=True)
            constraints.append(x >> 0)
            flat = cp.vec(x, order="F")
            length = n * n
        variables.append(x)
        r, c, v = rows[b]
        if v:
            lhs = lhs + sp.csr_matrix((v, (r, c)), shape=(m, length)) @ flat
        oc, ov = objective[b]
        if ov:
            obj = obj + sp.csr_matrix((ov, ([0] * len(oc), oc)), shape=(1, length)) @ flat
    equality = lhs == rhs
    constraints.append(equality)
    problem = cp.Problem(cp.Maximize(cp.sum(obj)), constraints)
    solver = os.environ.get("TURAN_CVXPY_SOLVER", "CLARABEL")
    try:
        problem.solve(solver=solver)
    except cp.error.SolverError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return 1
    if problem.status not in ("optimal", "optimal_inaccurate"):
        print(f"solver status: {problem.status}", file=sys.stderr)
        return 1

    # cvxpy's multiplier for A x = a gives the CSDP dual y up to sign.
    y = -np.asarray(equality.dual_value, dtype=float).reshape(-1)
    z_blocks = []
    for b, s in enumerate(sizes):
        n = dims[b]
        z = np.zeros((n, n))
        for mat, bb, i, j, v in entries:
            if bb != b:
                continue
            weight = -1.0 if mat == 0 else y[mat - 1]
            z[i, j] += weight * v
            if i != j:
                z[j, i] += weight * v
        z_blocks.append(z)

    with open(argv[2], "w") as out:
        out.write(" ".join(f"{v:.17g}" for v in y) + "\n")
        for tag, mats in ((1, z_blocks), (2, [np.atleast_1d(v.value) for v in variables])):
            for b, s in enumerate(sizes):
                mat = mats[b]
                n = dims[b]
                for i in range(n):
                    for j in range(i, n):
                        if s < 0 and i != j:
                            continue
                        if tag == 2:
                            val = mat[i] if s < 0 else 0.5 * (mat[i, j] + mat[j, i])
                        else:
                            val = mat[i, j]
                        if val != 0.0 or (s < 0 and tag == 2):
                            out.write(f"{tag} {b + 1} {i + 1} {j + 1} {val:.17g}\n")
    print(f"status {problem.status} objective {problem.value:.12g}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
