#!/usr/bin/env python3
# Copyright 2026 The wecopt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the synthetic damping dataset used by `wecctl costfit`.

Samples follow v2 = a / (b + c) with 1% multiplicative Gaussian noise.
"""

import argparse

import numpy as np


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/damping_samples.csv")
    parser.add_argument("--a", type=float, default=1330.2)
    parser.add_argument("--c", type=float, default=9158.7)
    parser.add_argument("--noise", type=float, default=0.01)
    parser.add_argument("--seed", type=int, default=20260415)
    parser.add_argument("--count", type=int, default=40)
    parser.add_argument("--b-min", type=float, default=200.0)
    parser.add_argument("--b-max", type=float, default=1.0e5)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    b = np.geomspace(args.b_min, args.b_max, args.count)
    v2 = args.a / (b + args.c) * (1.0 + args.noise * rng.standard_normal(b.size))
    with open(args.out, "w") as f:
        f.write("damping,mean_sq_velocity\n")
        for bi, vi in zip(b, v2):
            f.write(f"{bi:.6g},{vi:.9g}\n")


if __name__ == "__main__":
    main()
