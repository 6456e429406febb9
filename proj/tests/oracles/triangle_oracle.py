# Copyright 2026 The tanc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference values for the two three-dimensional examples.

Exact subspace facts come from sympy; the best reachable loss of the first
example comes from multi-restart BFGS over encoder entries with closed-form
decoders. Run with python3; results are pasted into the C++ tests.
"""
import numpy as np
import sympy as sp
from scipy.optimize import minimize


def colspace(*vectors):
    return sp.Matrix.hstack(*[sp.Matrix(v) for v in vectors])


def intersection_dim(a, b):
    return a.rank() + b.rank() - sp.Matrix.hstack(a, b).rank()


def intersection_basis(a, b):
    null = sp.Matrix.hstack(a, -b).nullspace()
    return [a * v[: a.shape[1], :] for v in null]


e1, e2, e3 = [1, 0, 0], [0, 1, 0], [0, 0, 1]
U1 = colspace(e1, e2)
U2 = colspace(e2, e3)

print("== blocked example")
U3 = colspace(e2, e3)
U4 = colspace(e2, e1)
print("r_plus", sp.Matrix.hstack(U3, U4).rank())
print("r_minus_13", intersection_dim(U1, U3), "r_minus_24", intersection_dim(U2, U4))
join = sp.Matrix.hstack(*intersection_basis(U1, U3), *intersection_basis(U3, U4))
print("sf1 join rank", join.rank(), "vs", U3.rank(), "contained",
      sp.Matrix.hstack(join, U3).rank() == U3.rank())

print("== coded example")
V3 = colspace([1, 1, 3], [4, -7, 1])
V4 = colspace([1, 1, 3], [-7, 4, 1])
print("U1 cap U3", [list(v.T / v[0]) for v in intersection_basis(U1, V3)])
print("U2 cap U4", [list(v.T / v[1]) for v in intersection_basis(U2, V4)])
print("U3 cap U4", [list(v.T / v[0]) for v in intersection_basis(V3, V4)])
for name, obs, u in (("sf1", U1, V3), ("sf2", U2, V4)):
    j = sp.Matrix.hstack(*intersection_basis(obs, u), *intersection_basis(V3, V4))
    print(name, j.rank() == u.rank() and sp.Matrix.hstack(j, u).rank() == u.rank())


def task(vectors, mu):
    u = np.array(vectors, dtype=float).T
    u /= np.linalg.norm(u, axis=0)
    full = np.linalg.qr(np.hstack([u, np.eye(3)]))[0][:, :3]
    full[:, :2] = u
    return np.diag(np.sqrt(mu)) @ full.T


def best_loss(k3, k4, restarts=200, seed=0):
    rng = np.random.default_rng(seed)

    def loss(p):
        e13, e15, e24, e25, e56 = p[0:2], p[2:4], p[4:6], p[6:8], p[8:10]
        relay = e56[0] * np.array([e15[0], e15[1], 0]) + e56[1] * np.array([0, e25[0], e25[1]])
        a3 = np.vstack([[e13[0], e13[1], 0], relay])
        a4 = np.vstack([[0, e24[0], e24[1]], relay])
        total = 0.0
        for k, a in ((k3, a3), (k4, a4)):
            d = a.T @ np.linalg.pinv(a @ a.T, rcond=1e-12)
            r = np.eye(3) - d @ a
            total += np.trace(k @ r @ r.T @ k.T)
        return total

    best = np.inf
    for _ in range(restarts):
        res = minimize(loss, rng.normal(size=10), method="BFGS")
        best = min(best, res.fun)
    return best


mu = [2.0, 1.0, 0.0]
k3 = task([e2, e3], mu)
k4 = task([e2, e1], mu)
print("blocked example best reachable loss", best_loss(k3, k4), "lower bound 0")
