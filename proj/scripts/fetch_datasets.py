#!/usr/bin/env python3
# Copyright 2026 The respscore Authors.
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
"""Downloads the public datasets and writes CSVs matching data/schemas.

Usage:
  scripts/fetch_datasets.py [--out data/raw] [--only german_credit,adult,diabetes_130]
  scripts/fetch_datasets.py --from-dir DIR   # convert files downloaded by hand

With --from-dir the script expects the original file names (german.data,
adult.data, adult.test, diabetic_data.csv) inside DIR instead of downloading.
"""

import argparse
import csv
import io
import os
import sys
import urllib.request
import zipfile

UCI = "https://archive.ics.uci.edu"
SOURCES = {
    "german_credit": [(UCI + "/ml/machine-learning-databases/statlog/german/german.data", "german.data")],
    "adult": [
        (UCI + "/ml/machine-learning-databases/adult/adult.data", "adult.data"),
        (UCI + "/ml/machine-learning-databases/adult/adult.test", "adult.test"),
    ],
    "diabetes_130": [
        (UCI + "/static/public/296/diabetes+130-us+hospitals+for+years+1999-2008.zip", "diabetes.zip"),
    ],
}

GERMAN_COLUMNS = [
    "status_checking", "duration_months", "credit_history", "purpose", "credit_amount", "savings",
    "employment_since", "installment_rate", "personal_status", "other_debtors", "residence_since",
    "property", "age", "other_installment_plans", "housing", "existing_credits", "job",
    "people_liable", "telephone", "foreign_worker",
]
# personal_status codes: A92 and A95 describe women, the others men.
GERMAN_FEMALE = {"A92", "A95"}

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num", "marital_status", "occupation",
    "relationship", "race", "sex", "capital_gain", "capital_loss", "hours_per_week",
    "native_country", "income",
]

DIABETES_COLUMNS = [
    "race", "gender", "age", "admission_type_id", "discharge_disposition_id", "admission_source_id",
    "time_in_hospital", "num_lab_procedures", "num_procedures", "num_medications",
    "number_outpatient", "number_emergency", "number_inpatient", "number_diagnoses",
    "max_glu_serum", "A1Cresult", "insulin", "change", "diabetesMed",
]


def read_bytes(name, url, from_dir):
    if from_dir:
        with open(os.path.join(from_dir, name), "rb") as f:
            return f.read()
    print(f"downloading {url}", file=sys.stderr)
    with urllib.request.urlopen(url, timeout=120) as resp:
        return resp.read()


def clean(value):
    value = value.strip()
    return "unknown" if value in ("", "?", "None") else value


def convert_german(blobs):
    rows = []
    for line in blobs["german.data"].decode("ascii").splitlines():
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 21:
            raise ValueError(f"german.data: expected 21 fields, got {len(fields)}")
        record = dict(zip(GERMAN_COLUMNS, fields[:20]))
        record["sex"] = "female" if record["personal_status"] in GERMAN_FEMALE else "male"
        record["credit_risk"] = "good" if fields[20] == "1" else "bad"
        rows.append(record)
    return GERMAN_COLUMNS + ["sex", "credit_risk"], rows


def convert_adult(blobs):
    rows = []
    for name in ("adult.data", "adult.test"):
        for fields in csv.reader(io.StringIO(blobs[name].decode("ascii"))):
            if len(fields) != len(ADULT_COLUMNS):
                continue  # blank lines and the test file's banner line
            record = {c: clean(v) for c, v in zip(ADULT_COLUMNS, fields)}
            record["income"] = record["income"].rstrip(".")
            rows.append(record)
    return ADULT_COLUMNS, rows


def convert_diabetes(blobs):
    with zipfile.ZipFile(io.BytesIO(blobs["diabetes.zip"])) as z:
        member = next(n for n in z.namelist() if n.endswith("diabetic_data.csv"))
        text = z.read(member).decode("utf-8")
    return convert_diabetes_text(text)


def convert_diabetes_text(text):
    rows = []
    for src in csv.DictReader(io.StringIO(text)):
        if src["gender"] not in ("Female", "Male"):
            continue
        record = {c: clean(src[c]) for c in DIABETES_COLUMNS}
        record["readmitted_30"] = "yes" if src["readmitted"].strip() == "<30" else "no"
        rows.append(record)
    return DIABETES_COLUMNS + ["readmitted_30"], rows


CONVERTERS = {"german_credit": convert_german, "adult": convert_adult, "diabetes_130": convert_diabetes}


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "raw"))
    parser.add_argument("--only", default=",".join(SOURCES))
    parser.add_argument("--from-dir", help="convert local copies instead of downloading")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for name in [n.strip() for n in args.only.split(",") if n.strip()]:
        if name not in SOURCES:
            parser.error(f"unknown dataset '{name}'")
        if args.from_dir and name == "diabetes_130" and os.path.exists(os.path.join(args.from_dir, "diabetic_data.csv")):
            with open(os.path.join(args.from_dir, "diabetic_data.csv"), encoding="utf-8") as f:
                header, rows = convert_diabetes_text(f.read())
        else:
            blobs = {fname: read_bytes(fname, url, args.from_dir) for url, fname in SOURCES[name]}
            header, rows = CONVERTERS[name](blobs)
        path = os.path.join(args.out, name + ".csv")
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=header, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {path} ({len(rows)} rows)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
