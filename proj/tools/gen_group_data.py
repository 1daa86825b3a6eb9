#!/usr/bin/env python3
# Copyright 2026 The rfslab Authors
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
"""Regenerates data/groups/{S3,D4,Q8}.json.

Elements are listed by a faithful matrix representation; the multiplication
table is recovered by matching matrix products, so the table and the irreps
cannot disagree.
"""
import json
import math
import pathlib

import numpy as np


def dihedral(n, name):
    # r^k s^f, index f*n + k. S3 is D3.
    rot = lambda k: np.array([[math.cos(2 * math.pi * k / n), -math.sin(2 * math.pi * k / n)],
                              [math.sin(2 * math.pi * k / n), math.cos(2 * math.pi * k / n)]])
    s = np.array([[1.0, 0.0], [0.0, -1.0]])
    elems = [(k, f) for f in range(2) for k in range(n)]
    faithful = [rot(k) @ np.linalg.matrix_power(s, f) for k, f in elems]
    irreps = [("trivial", [np.eye(1) for _ in elems]),
              ("sign", [np.array([[(-1.0) ** f]]) for k, f in elems])]
    if n % 2 == 0:
        irreps.append(("rot_sign", [np.array([[(-1.0) ** k]]) for k, f in elems]))
        irreps.append(("rot_refl_sign", [np.array([[(-1.0) ** (k + f)]]) for k, f in elems]))
    irreps.append(("standard", faithful))
    return name, faithful, irreps


def quaternion():
    one = np.eye(2, dtype=complex)
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    qk = qi @ qj
    faithful = [one, -one, qi, -qi, qj, -qj, qk, -qk]
    # Characters: signs on (i, j, k) classes.
    def char(si, sj):
        vals = [1, 1, si, si, sj, sj, si * sj, si * sj]
        return [np.array([[float(v)]]) for v in vals]
    irreps = [("trivial", char(1, 1)), ("chi_i", char(1, -1)), ("chi_j", char(-1, 1)),
              ("chi_k", char(-1, -1)), ("spin", faithful)]
    return "Q8", faithful, irreps


def table_of(faithful):
    n = len(faithful)
    t = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            p = faithful[a] @ faithful[b]
            hits = [c for c in range(n) if np.allclose(p, faithful[c], atol=1e-12)]
            assert len(hits) == 1
            t[a][b] = hits[0]
    return t


def snap(x):
    # Remove -0.0 and 1e-17 noise so the shipped tables are clean.
    return 0.0 if abs(x) < 1e-15 else float(x)


def to_doc(name, faithful, irreps):
    return {
        "name": name,
        "order": len(faithful),
        "mult_table": table_of(faithful),
        "irreps": [{
            "label": label,
            "dim": int(mats[0].shape[0]),
            "matrices": [[[[snap(complex(z).real), snap(complex(z).imag)] for z in row] for row in m] for m in mats],
        } for label, mats in irreps],
    }


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "groups"
    out.mkdir(parents=True, exist_ok=True)
    for name, faithful, irreps in (dihedral(3, "S3"), dihedral(4, "D4"), quaternion()):
        (out / f"{name}.json").write_text(json.dumps(to_doc(name, faithful, irreps), indent=1) + "\n")


if __name__ == "__main__":
    main()
