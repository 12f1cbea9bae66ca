"""The staged elliptic-curve census, on the bundled fixture table.

Stages at p = 3 over k = Q_3(zeta_3):
    conductor < 1000 -> good at 3 -> ordinary -> 3 | #E(F_3)
    -> all of E[3] rational over k.

The bundled fixture has 30 hand-checked rows.  For the full run over
every curve of conductor < 1000 (expected stage counts 683 and 269),
fetch the table first:

    python scripts/fetch_cremona.py
    localcft census --input data/allcurves.00000-09999 --p 3 --M 1 \
        --max-conductor 1000 --out census.json

Run:  python demos/04_census.py
"""

import os

from localcft.census import parse_database, run_census

fixture = os.path.join(os.path.dirname(__file__), "..", "tests", "data",
                       "allcurves_fixture.txt")
records, errors = parse_database(fixture)
print(f"parsed {len(records)} records ({len(errors)} malformed)")

report = run_census(records, p=3, M=1, conductor_bound=1000)
print("\nstage counts:")
for key, value in report.stages.items():
    print(f"  {key:>9}: {value}")

print("\nfinalists and their finite class groups:")
for row in report.curves:
    if row["V_fin"]:
        print(f"  {row['label']:>6}  a_3 = {row['a_p']:>2}  "
          f"E(F_3) = {row['reduced_group']}  V_fin = {row['V_fin']}")

print("\nper-curve timing lives in report.timings; errors are quarantined,"
      "\nnever fatal:", report.errors or "none here")
