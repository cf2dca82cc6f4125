#!/usr/bin/env python3
# Copyright 2026 The dsyn Authors
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

"""Writes data/toy_census.csv: 5000 census-like rows with real dependencies.

Rerunning reproduces the file byte for byte.
"""

import argparse
import csv
import random

AGE = ["16-24", "25-34", "35-44", "45-54", "55-64", "65+"]
SEX = ["female", "male"]
EDUCATION = ["none", "high_school", "some_college", "bachelor", "graduate"]
INCOME = ["<20k", "20-40k", "40-70k", "70-110k", "110k+"]
MARITAL = ["never_married", "married", "divorced", "widowed"]
REGION = ["northeast", "midwest", "south", "west"]
HOURS = ["0", "1-20", "21-39", "40", "41+"]
WORKER = ["private", "government", "self_employed", "not_working"]


def pick(rng, labels, weights):
    return rng.choices(labels, weights=weights)[0]


def clamp(i, n):
    return max(0, min(n - 1, i))


def row(rng):
    age = pick(rng, AGE, [14, 19, 18, 18, 16, 15])
    a = AGE.index(age)
    sex = pick(rng, SEX, [51, 49])
    region = pick(rng, REGION, [17, 21, 38, 24])

    # education peaks in the middle age bands
    edu_w = [8, 30, 27, 22, 13] if a > 0 else [10, 45, 35, 9, 1]
    if a == 5:
        edu_w = [18, 38, 20, 15, 9]
    education = pick(rng, EDUCATION, edu_w)
    e = EDUCATION.index(education)

    if a == 0:
        marital = pick(rng, MARITAL, [85, 12, 2, 1])
    elif a == 5:
        marital = pick(rng, MARITAL, [6, 52, 14, 28])
    else:
        marital = pick(rng, MARITAL, [30 - 5 * a, 50 + 3 * a, 12 + 2 * a, 2 + a])

    if a == 5:
        worker = pick(rng, WORKER, [12, 4, 8, 76])
    elif a == 0:
        worker = pick(rng, WORKER, [55, 6, 3, 36])
    else:
        worker = pick(rng, WORKER, [62, 15, 11, 12])
    w = WORKER.index(worker)

    if worker == "not_working":
        hours = pick(rng, HOURS, [88, 10, 2, 0, 0])
    else:
        hours = pick(rng, HOURS, [0, 12, 18, 45, 25] if a else [0, 35, 35, 22, 8])
    h = HOURS.index(hours)

    level = round((e + h) / 2 + (0.4 if sex == "male" else 0.0)
                  + (0.5 if region == "northeast" else 0.0)
                  + rng.gauss(0, 0.8)) - 1
    if w == 3:
        level = min(level, 1)
    income = INCOME[clamp(level, len(INCOME))]
    return [age, sex, education, income, marital, region, hours, worker]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=20130101)
    parser.add_argument("--out", default="data/toy_census.csv")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    with open(args.out, "w", newline="") as f:
        out = csv.writer(f, lineterminator="\n")
        out.writerow(["age_band", "sex", "education", "income_band", "marital",
                      "region", "hours_band", "class_of_worker"])
        for _ in range(args.rows):
            out.writerow(row(rng))


if __name__ == "__main__":
    main()
