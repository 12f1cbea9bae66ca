"""Curve-database ingestion and the census pipeline.

Reads Cremona-format allcurves tables (or the equivalent CSV), runs the
staged filter

    conductor bound -> good at p -> ordinary -> reduced p-torsion
    nonzero -> full p-torsion over Q_p(mu_{p^M})

and emits a deterministic report with per-curve rows and the finite
class-group structure for the finalists.  Individual curve failures are
quarantined, never fatal; parallel runs reduce in input order and give
byte-identical results.

The full conductor-below-1000 table is not shipped with the package;
scripts/fetch_cremona.py documents where to obtain it.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field

from . import __version__
from .curves import WeierstrassCurve, fq_point_count
from .exceptions import DataError
from .padic import ResidueField
from .structure import check_conditions, class_group_finite_part

STAGE_KEYS = ("total", "good", "ordinary", "red_tors", "full_tors")


@dataclass
class CurveRecord:
    label: str
    conductor: int
    ainvs: tuple
    rank: int | None = None
    torsion: int | None = None

    def __post_init__(self):
        if self.conductor < 11:
            raise DataError(f"conductor {self.conductor} below 11")
        WeierstrassCurve.from_ainvs(self.ainvs)  # raises when singular


@dataclass
class CensusReport:
    params: dict
    stages: dict
    curves: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    version: str = __version__

    def to_json_dict(self) -> dict:
        return {
            "params": self.params,
            "stages": {k: self.stages[k] for k in STAGE_KEYS},
            "curves": self.curves,
            "errors": self.errors,
            "timings": self.timings,
            "version": self.version,
        }


# ----------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------

def _parse_ainvs(text: str):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise DataError(f"a-invariants not bracketed: {text!r}")
    parts = [t.strip() for t in text[1:-1].split(",")]
    if len(parts) != 5:
        raise DataError(f"expected 5 a-invariants: {text!r}")
    try:
        return tuple(int(t) for t in parts)
    except ValueError as exc:
        raise DataError(f"non-integer a-invariant in {text!r}") from exc


def _parse_allcurves_line(line: str) -> CurveRecord:
    parts = line.split()
    if len(parts) < 4:
        raise DataError(f"short line: {line!r}")
    conductor = int(parts[0])
    label = f"{parts[0]}{parts[1]}{parts[2]}"
    ainvs = _parse_ainvs(parts[3])
    rank = int(parts[4]) if len(parts) > 4 else None
    torsion = int(parts[5]) if len(parts) > 5 else None
    return CurveRecord(label, conductor, ainvs, rank, torsion)


def _parse_csv_row(row: dict) -> CurveRecord:
    try:
        return CurveRecord(
            label=row["label"].strip(),
            conductor=int(row["conductor"]),
            ainvs=_parse_ainvs(row["ainvs"]),
            rank=int(row["rank"]) if row.get("rank") else None,
            torsion=int(row["torsion"]) if row.get("torsion") else None,
        )
    except (KeyError, ValueError) as exc:
        raise DataError(f"bad CSV row {row!r}: {exc}") from exc


def parse_database(path: str, fmt: str = "cremona-allcurves"):
    """Parse a curve table; returns (records, error_strings).

    Malformed lines are collected, not fatal.  Raises DataError when the
    file is unreadable or yields no records at all.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    records, errors = [], []
    if fmt == "cremona-allcurves":
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                records.append(_parse_allcurves_line(line))
            except (DataError, ValueError) as exc:
                errors.append(f"line {lineno}: {exc}")
    elif fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        for lineno, row in enumerate(reader, 2):
            try:
                records.append(_parse_csv_row(row))
            except DataError as exc:
                errors.append(f"line {lineno}: {exc}")
    else:
        raise DataError(f"unknown format {fmt!r}")
    if not records:
        raise DataError(f"no curve records found in {path}")
    return records, errors


def resolve_input_path(name: str) -> str:
    """Resolve an input file against cwd and CFT_DATA_DIR."""
    if os.path.isabs(name) or os.path.exists(name):
        return name
    data_dir = os.environ.get("CFT_DATA_DIR")
    if data_dir:
        cand = os.path.join(data_dir, name)
        if os.path.exists(cand):
            return cand
    return name


# ----------------------------------------------------------------------
# the pipeline
# ----------------------------------------------------------------------

def _examine_curve(args) -> dict:
    """Worker: full per-curve classification; plain data in and out."""
    label, ainvs, p, M = args
    try:
        E = WeierstrassCurve.from_ainvs(ainvs)
        report = check_conditions(E, p, M, label=label)
        passed_red = bool(report.good and report.ordinary
                          and report.reduced_group.order % p == 0)
        row = report.to_row()
        if "warning" in report.diagnostics:
            row["warning"] = report.diagnostics["warning"]
        if report.hypotheses_met:
            row["V_fin"] = class_group_finite_part(report).to_list()
        else:
            row["V_fin"] = None
        return {"row": row, "stage_red": passed_red,
                "stage_full": report.hypotheses_met and passed_red,
                "good": report.good, "ordinary": report.ordinary}
    except Exception as exc:  # quarantined, never fatal
        return {"error": f"{label}: {type(exc).__name__}: {exc}"}


def _fast_path_red_tors(ainvs, p) -> bool:
    """For p = 3: reduced torsion stage iff a_3 = 1 (mod 3)."""
    rf = ResidueField(p, 1)
    E = WeierstrassCurve.from_ainvs(ainvs)
    ap = p + 1 - fq_point_count(E.reduction(rf), rf)
    return ap % p != 0 and (p + 1 - ap) % p == 0


def run_census(records, p: int = 3, M: int = 1, conductor_bound: int = 1000,
               inclusive: bool = False, jobs: int = 1,
               parse_errors=None) -> CensusReport:
    """Run the staged census over parsed records.

    The conductor bound is strict by default (`inclusive` switches to <=)
    and the unit of counting is individual curve records; both choices
    are recorded in the report params.
    """
    if p == 2 or p < 2:
        raise DataError("p must be an odd prime")
    t_start = time.perf_counter()
    in_bound = [r for r in records
                if (r.conductor <= conductor_bound if inclusive
                    else r.conductor < conductor_bound)]
    work = [(r.label, tuple(r.ainvs), p, M) for r in in_bound]

    if jobs > 1:
        import multiprocessing as mp
        with mp.Pool(jobs) as pool:
            outcomes = pool.map(_examine_curve, work, chunksize=64)
    else:
        outcomes = [_examine_curve(w) for w in work]

    stages = dict.fromkeys(STAGE_KEYS, 0)
    stages["total"] = len(in_bound)
    rows, errors = [], list(parse_errors or [])
    fastpath_mismatch = []
    for rec, out in zip(in_bound, outcomes):
        if "error" in out:
            errors.append(out["error"])
            continue
        stages["good"] += out["good"]
        stages["ordinary"] += out["good"] and out["ordinary"]
        stages["red_tors"] += out["stage_red"]
        stages["full_tors"] += out["stage_full"]
        rows.append(out["row"])
        if p == 3 and out["good"]:
            fast = _fast_path_red_tors(rec.ainvs, p)
            if fast != out["stage_red"]:
                fastpath_mismatch.append(rec.label)
    if fastpath_mismatch:
        errors.append("fast-path/enumeration disagreement: "
                      + ", ".join(fastpath_mismatch))

    report = CensusReport(
        params={"p": p, "M": M, "conductor_bound": conductor_bound,
                "bound_convention": "<=" if inclusive else "<",
                "counting_unit": "curves", "jobs": jobs},
        stages=stages,
        curves=rows,
        errors=errors,
    )
    report.timings = {"census_seconds": round(time.perf_counter() - t_start, 3)}
    return report


def write_report(report: CensusReport, path: str, fmt: str = "json") -> None:
    """Serialize a report; JSON output is byte-stable apart from timings."""
    if fmt == "json":
        payload = json.dumps(report.to_json_dict(), indent=1, sort_keys=False)
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc}") from exc
    elif fmt == "csv":
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["label", "a_p", "good", "ord", "rat", "ram",
                                 "N", "reduced_group", "V_fin"])
                for row in report.curves:
                    writer.writerow([
                        row["label"], row["a_p"],
                        row["flags"]["good"], row["flags"]["ord"],
                        row["flags"]["rat"], row["flags"]["ram"],
                        row["N"],
                        ";".join(map(str, row["reduced_group"])),
                        ";".join(map(str, row["V_fin"])) if row["V_fin"] else "",
                    ])
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc}") from exc
    else:
        raise DataError(f"unknown report format {fmt!r}")


def stable_payload(report: CensusReport) -> dict:
    """The deterministic part of a report (timings excluded)."""
    d = report.to_json_dict()
    d.pop("timings", None)
    return d
