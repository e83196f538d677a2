#!/usr/bin/env python3
# Copyright 2026 The arahope Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes tests/fixtures/qwk_cases.json.

Exact quadratic weighted kappa over random confusion matrices, computed with
fractions so the stored values carry no rounding. The file is committed; rerun
only to extend the cases.
"""

import json
import random
import sys
from fractions import Fraction
from pathlib import Path


def kappa(counts):
    k = len(counts)
    n = sum(map(sum, counts))
    rows = [sum(r) for r in counts]
    cols = [sum(counts[i][j] for i in range(k)) for j in range(k)]
    wo = Fraction(0)
    we = Fraction(0)
    for i in range(k):
        for j in range(k):
            w = Fraction((i - j) ** 2, (k - 1) ** 2)
            wo += w * Fraction(counts[i][j], n)
            we += w * Fraction(rows[i], n) * Fraction(cols[j], n)
    if we == 0:
        return Fraction(1) if wo == 0 else None
    return 1 - wo / we


def main():
    rng = random.Random(7351)
    cases = []
    # Hand case: a=[0,0,1,2], b=[0,1,1,2].
    cases.append({"counts": [[1, 1, 0], [0, 1, 0], [0, 0, 1]]})
    while len(cases) < 150:
        k = rng.choice([2, 3, 4])
        n = rng.randint(1, 50)
        counts = [[0] * k for _ in range(k)]
        for _ in range(n):
            counts[rng.randrange(k)][rng.randrange(k)] += 1
        cases.append({"counts": counts})
    for case in cases:
        value = kappa(case["counts"])
        case["kappa"] = None if value is None else f"{value.numerator}/{value.denominator}"
        case["kappa_float"] = None if value is None else float(value)
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "fixtures" / "qwk_cases.json"
    out.write_text(json.dumps({"generator": "qwk_fixture.py", "seed": 7351, "cases": cases}, indent=1) + "\n")


if __name__ == "__main__":
    main()
