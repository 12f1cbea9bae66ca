#!/usr/bin/env python3
"""Fetch the Cremona allcurves table for conductors below 10000.

The census input is John Cremona's elliptic curve database
(https://github.com/JohnCremona/ecdata), file allcurves/allcurves.00000-09999.
The table is not vendored with this repository; this script downloads it
into ./data/ (or $CFT_DATA_DIR when set).

Usage:
    python scripts/fetch_cremona.py [--dest DIR] [--mirror-base URL]

Behind a proxy/mirror, point --mirror-base at any host that serves the
repository path, e.g. an Artifactory github remote:
    --mirror-base https://<artifactory>/artifactory/github
"""

import argparse
import os
import sys
import urllib.request

FILE = "allcurves.00000-09999"
REPO_PATH = "JohnCremona/ecdata/raw/master/allcurves/" + FILE
DEFAULT_BASES = [
    "https://github.com",
    "https://raw.githubusercontent.com/JohnCremona/ecdata/master/allcurves",
]


def fetch(dest_dir: str, mirror_base: str | None) -> str:
    os.makedirs(dest_dir, exist_ok=True)
    dest = os.path.join(dest_dir, FILE)
    if os.path.exists(dest) and os.path.getsize(dest) > 10 ** 6:
        print(f"already present: {dest}")
        return dest
    bases = [mirror_base] if mirror_base else []
    bases += DEFAULT_BASES
    last_err = None
    for base in bases:
        if base.rstrip("/").endswith("allcurves"):
            url = base.rstrip("/") + "/" + FILE
        else:
            url = base.rstrip("/") + "/" + REPO_PATH
        try:
            print(f"fetching {url} ...")
            with urllib.request.urlopen(url, timeout=120) as resp:
                payload = resp.read()
            if not payload.startswith(b"11 a 1"):
                raise IOError("unexpected payload (not an allcurves table)")
            with open(dest, "wb") as fh:
                fh.write(payload)
            print(f"wrote {dest} ({len(payload)} bytes)")
            return dest
        except Exception as exc:
            last_err = exc
            print(f"  failed: {exc}")
    raise SystemExit(f"could not fetch {FILE}: {last_err}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dest", default=os.environ.get("CFT_DATA_DIR", "data"))
    ap.add_argument("--mirror-base", default=os.environ.get("CFT_MIRROR_BASE"))
    args = ap.parse_args()
    fetch(args.dest, args.mirror_base)


if __name__ == "__main__":
    sys.exit(main())
