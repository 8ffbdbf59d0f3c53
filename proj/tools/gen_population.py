#!/usr/bin/env python3
# Copyright 2026 The Authsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the synthetic reference population used by the risk indicators.

Values are already in the canonical form produced by attribute
normalization (case-folded text, ISO 3166 alpha-2 country codes).
Exactly 60% of the rows have gender "f".
"""

import argparse
import csv
import random

AGE_BANDS = ["18-24", "25-34", "35-44", "45-54", "55-64", "65+"]
AGE_WEIGHTS = [12, 20, 19, 18, 16, 15]
COUNTRIES = ["CY", "GR", "DE", "FR", "IT", "ES", "GB", "NL", "PT", "MT"]
COUNTRY_WEIGHTS = [6, 14, 20, 16, 14, 12, 10, 5, 2, 1]
EDUCATION = ["primary", "secondary", "bachelor", "master", "doctorate"]
# Occupation distribution conditioned on education, so revealing one shifts
# the odds of the other.
OCCUPATIONS = {
    "primary": (["farmer", "retail", "trades", "unemployed"], [3, 4, 5, 3]),
    "secondary": (["retail", "trades", "clerk", "unemployed", "driver"],
                  [5, 5, 4, 2, 3]),
    "bachelor": (["clerk", "engineer", "teacher", "nurse", "manager"],
                 [3, 4, 4, 3, 2]),
    "master": (["engineer", "teacher", "manager", "lawyer", "researcher"],
               [4, 2, 4, 2, 2]),
    "doctorate": (["researcher", "physician", "professor", "engineer"],
                  [5, 3, 3, 1]),
}
EDU_WEIGHTS_BY_AGE = {
    "18-24": [5, 50, 35, 9, 1],
    "25-34": [5, 30, 38, 22, 5],
    "35-44": [8, 32, 32, 22, 6],
    "45-54": [12, 38, 28, 17, 5],
    "55-64": [18, 42, 24, 12, 4],
    "65+": [30, 40, 18, 9, 3],
}
MARITAL_BY_AGE = {
    "18-24": [85, 13, 1, 1],
    "25-34": [50, 45, 4, 1],
    "35-44": [25, 62, 11, 2],
    "45-54": [15, 65, 16, 4],
    "55-64": [10, 64, 18, 8],
    "65+": [6, 56, 14, 24],
}
MARITAL = ["single", "married", "divorced", "widowed"]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--rows", type=int, default=10000)
    parser.add_argument("--seed", type=int, default=20260101)
    parser.add_argument("--out", default="data/population.csv")
    args = parser.parse_args()
    if args.rows % 5 != 0:
        parser.error("--rows must be a multiple of 5 for an exact 60% split")

    rng = random.Random(args.seed)
    genders = ["f"] * (args.rows * 3 // 5) + ["m"] * (args.rows * 2 // 5)
    rng.shuffle(genders)

    with open(args.out, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["gender", "age_band", "country", "occupation",
                         "marital_status", "education"])
        for gender in genders:
            age = rng.choices(AGE_BANDS, AGE_WEIGHTS)[0]
            country = rng.choices(COUNTRIES, COUNTRY_WEIGHTS)[0]
            edu = rng.choices(EDUCATION, EDU_WEIGHTS_BY_AGE[age])[0]
            occ_values, occ_weights = OCCUPATIONS[edu]
            occupation = rng.choices(occ_values, occ_weights)[0]
            marital = rng.choices(MARITAL, MARITAL_BY_AGE[age])[0]
            writer.writerow([gender, age, country, occupation, marital, edu])


if __name__ == "__main__":
    main()
