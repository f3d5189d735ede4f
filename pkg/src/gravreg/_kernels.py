"""Numba-compiled inner loops: tree traversal forces and pairwise potential."""

import numpy as np
from numba import njit


@njit(cache=True)
def bh_forces_kernel(children, com, mass, length, queries, query_masses,
                     theta, G, eps2, stack_cap):
    m, d = queries.shape
    forces = np.zeros((m, d))
    visits = np.zeros(m, dtype=np.int64)
    stack = np.empty(stack_cap, dtype=np.int64)
    theta2 = theta * theta
    n_child = children.shape[1]

    for q in range(m):
        sp = 0
        stack[sp] = 0
        sp += 1
        nv = 0
        while sp > 0:
            sp -= 1
            node = stack[sp]
            nv += 1
            d2 = 0.0
            for k in range(d):
                dk = queries[q, k] - com[node, k]
                d2 += dk * dk
            leaf = children[node, 0] < 0
            if leaf:
                for c in range(1, n_child):
                    if children[node, c] >= 0:
                        leaf = False
                        break
            # summarize when l/r < theta (strict) or at a leaf
            if leaf or length[node] * length[node] < theta2 * d2:
                denom = d2 + eps2
                if denom > 0.0:
                    w = G * query_masses[q] * mass[node] / (denom * np.sqrt(denom))
                    for k in range(d):
                        forces[q, k] -= w * (queries[q, k] - com[node, k])
            else:
                for c in range(n_child):
                    child = children[node, c]
                    if child >= 0:
                        stack[sp] = child
                        sp += 1
        visits[q] = nv
    return forces, visits


@njit(cache=True)
def gpe_kernel(pos_y, mass_y, pos_x, mass_x, G, eps):
    m, d = pos_y.shape
    n = pos_x.shape[0]
    total = 0.0
    for i in range(m):
        acc = 0.0
        for j in range(n):
            d2 = 0.0
            for k in range(d):
                dk = pos_y[i, k] - pos_x[j, k]
                d2 += dk * dk
            acc += mass_x[j] / (np.sqrt(d2) + eps)
        total += mass_y[i] * acc
    return -G * total
