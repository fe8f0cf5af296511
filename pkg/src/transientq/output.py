"""Deterministic emission of tables, pmf pairs, and validation reports.

Three formats are supported everywhere: ``csv`` (machine-readable, full
double precision, stable header), ``markdown`` (human-readable, the distance
table mirrors the reference layout with b rows, t columns, three decimals),
and ``jsonl`` (one JSON object per cell/row/check with stable field names).
Floating-point values in csv/jsonl are serialized with ``repr``-style
shortest round-trip formatting, so re-reading reproduces the exact doubles
and identical inputs yield byte-identical outputs.
"""

from __future__ import annotations

import csv
import io
import json
from typing import IO, Iterable

import numpy as np

from .metrics import DistanceTable, Verdict
from .pmf import Pmf
from .validation import ValidationReport

FORMATS = ("csv", "markdown", "jsonl")

TABLE_CSV_HEADER = ("b", "t", "rho", "kmax", "grid_size", "tail_bound")


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(x))


def normalize_format(fmt: str) -> str:
    """Canonicalize a format name; 'json-lines' is accepted for 'jsonl'."""
    name = str(fmt).strip().lower()
    if name == "json-lines":
        name = "jsonl"
    if name not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected csv, markdown or jsonl")
    return name


def _cells(table: DistanceTable):
    for i, b in enumerate(table.b_values):
        for j, t in enumerate(table.t_values):
            yield i, j, b, t


def write_table_csv(table: DistanceTable, stream: IO[str]) -> None:
    """One row per cell under the header ``b,t,rho,kmax,grid_size,tail_bound``."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TABLE_CSV_HEADER)
    for i, j, b, t in _cells(table):
        writer.writerow(
            [
                format_float(b),
                format_float(t),
                format_float(table.rho[i, j]),
                int(table.kmax[i, j]),
                int(table.grid_size[i, j]),
                format_float(table.tail_bound[i, j]),
            ]
        )


def read_table_csv(
    source: IO[str] | str, mu: float = 1.0, n0: int = 15, tail_tol: float = 1e-9
) -> DistanceTable:
    """Rebuild a DistanceTable from its CSV emission.

    The CSV schema carries only per-cell data; the grid-wide parameters
    (``mu``, ``n0``, ``tail_tol``) travel outside the file and are supplied
    here.  Values round-trip exactly thanks to shortest-repr serialization.
    """
    own = isinstance(source, str)
    stream = open(source, "r", encoding="utf-8", newline="") if own else source
    try:
        reader = csv.reader(stream)
        header = tuple(next(reader))
        if header != TABLE_CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows = [row for row in reader if row]
    finally:
        if own:
            stream.close()
    b_values: list[float] = []
    t_values: list[float] = []
    data: dict[tuple[float, float], tuple[float, int, int, float]] = {}
    for row in rows:
        b, t = float(row[0]), float(row[1])
        if b not in b_values:
            b_values.append(b)
        if t not in t_values:
            t_values.append(t)
        data[(b, t)] = (float(row[2]), int(row[3]), int(row[4]), float(row[5]))
    shape = (len(b_values), len(t_values))
    if len(data) != shape[0] * shape[1]:
        raise ValueError("CSV rows do not form a complete rectangular grid")
    rho = np.empty(shape)
    kmax = np.empty(shape, dtype=np.int64)
    grid_size = np.empty(shape, dtype=np.int64)
    tail_bound = np.empty(shape)
    for i, b in enumerate(b_values):
        for j, t in enumerate(t_values):
            rho[i, j], kmax[i, j], grid_size[i, j], tail_bound[i, j] = data[(b, t)]
    return DistanceTable(
        b_values=tuple(b_values),
        t_values=tuple(t_values),
        rho=rho,
        kmax=kmax,
        grid_size=grid_size,
        tail_bound=tail_bound,
        mu=mu,
        n0=n0,
        tail_tol=tail_tol,
    )


def write_table_markdown(table: DistanceTable, stream: IO[str]) -> None:
    """b rows, t columns, three decimals — the reference table layout."""
    header = "| b \\ t |" + "".join(f" {t:g} |" for t in table.t_values)
    stream.write(header + "\n")
    stream.write("|" + " --- |" * (len(table.t_values) + 1) + "\n")
    for i, b in enumerate(table.b_values):
        row = f"| {b:g} |" + "".join(
            f" {table.rho[i, j]:.3f} |" for j in range(len(table.t_values))
        )
        stream.write(row + "\n")


def write_table_jsonl(table: DistanceTable, stream: IO[str]) -> None:
    """One object per cell; field names are part of the output contract."""
    for i, j, b, t in _cells(table):
        record = {
            "b": b,
            "t": t,
            "rho": float(table.rho[i, j]),
            "kmax": int(table.kmax[i, j]),
            "grid_size": int(table.grid_size[i, j]),
            "tail_bound": float(table.tail_bound[i, j]),
            "mu": table.mu,
            "n0": table.n0,
        }
        stream.write(json.dumps(record) + "\n")


def write_table(table: DistanceTable, fmt: str, stream: IO[str]) -> None:
    fmt = normalize_format(fmt)
    if fmt == "csv":
        write_table_csv(table, stream)
    elif fmt == "markdown":
        write_table_markdown(table, stream)
    else:
        write_table_jsonl(table, stream)


def _aligned_pair(p_auto: Pmf, p_pois: Pmf) -> tuple[np.ndarray, np.ndarray]:
    size = max(p_auto.probs.size, p_pois.probs.size)
    a = np.zeros(size)
    g = np.zeros(size)
    a[: p_auto.probs.size] = p_auto.probs
    g[: p_pois.probs.size] = p_pois.probs
    return a, g


def write_pmf_pair_csv(p_auto: Pmf, p_pois: Pmf, stream: IO[str]) -> None:
    """Columns ``i,p_autonomous,p_poisson``; verdict travels out of band."""
    a, g = _aligned_pair(p_auto, p_pois)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["i", "p_autonomous", "p_poisson"])
    for i in range(a.size):
        writer.writerow([i, format_float(a[i]), format_float(g[i])])


def write_pmf_pair_markdown(
    p_auto: Pmf,
    p_pois: Pmf,
    rho: float,
    verdict: Verdict,
    threshold: float,
    stream: IO[str],
) -> None:
    a, g = _aligned_pair(p_auto, p_pois)
    stream.write("| i | p_autonomous | p_poisson |\n")
    stream.write("| --- | --- | --- |\n")
    for i in range(a.size):
        stream.write(f"| {i} | {a[i]:.12g} | {g[i]:.12g} |\n")
    stream.write(
        f"\nrho = {rho:.6f}; verdict: {verdict.value} "
        f"(threshold {threshold:g})\n"
    )


def write_pmf_pair_jsonl(
    p_auto: Pmf,
    p_pois: Pmf,
    rho: float,
    verdict: Verdict,
    threshold: float,
    stream: IO[str],
) -> None:
    a, g = _aligned_pair(p_auto, p_pois)
    for i in range(a.size):
        stream.write(
            json.dumps(
                {"i": i, "p_autonomous": float(a[i]), "p_poisson": float(g[i])}
            )
            + "\n"
        )
    stream.write(
        json.dumps(
            {
                "rho": float(rho),
                "threshold": float(threshold),
                "verdict": verdict.value,
            }
        )
        + "\n"
    )


def write_validation_csv(report: ValidationReport, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["check", "passed", "quantity", "tolerance", "observed", "detail"])
    for r in report.results:
        writer.writerow(
            [r.name, str(r.passed).lower(), r.quantity, r.tolerance, r.observed, r.detail]
        )


def write_validation_markdown(report: ValidationReport, stream: IO[str]) -> None:
    stream.write("| check | status | tolerance | observed |\n")
    stream.write("| --- | --- | --- | --- |\n")
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        stream.write(f"| {r.name} | {status} | {r.tolerance} | {r.observed} |\n")


def write_validation_jsonl(report: ValidationReport, stream: IO[str]) -> None:
    for r in report.results:
        stream.write(json.dumps(r.to_dict()) + "\n")


def write_validation(report: ValidationReport, fmt: str, stream: IO[str]) -> None:
    fmt = normalize_format(fmt)
    if fmt == "csv":
        write_validation_csv(report, stream)
    elif fmt == "markdown":
        write_validation_markdown(report, stream)
    else:
        write_validation_jsonl(report, stream)


def write_rows(
    fmt: str, header: tuple[str, ...], rows: Iterable[tuple], stream: IO[str]
) -> None:
    """Small generic emitter for simple row-shaped outputs (means, histograms).

    Floats are serialized with full precision in csv/jsonl; markdown shows
    12 significant digits.  Like every writer here, the stream is the last
    positional argument.
    """
    fmt = normalize_format(fmt)
    rows = list(rows)
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_float(v) if isinstance(v, float) else v for v in row]
            )
    elif fmt == "markdown":
        stream.write("| " + " | ".join(header) + " |\n")
        stream.write("|" + " --- |" * len(header) + "\n")
        for row in rows:
            cells = [f"{v:.12g}" if isinstance(v, float) else str(v) for v in row]
            stream.write("| " + " | ".join(cells) + " |\n")
    else:
        for row in rows:
            stream.write(
                json.dumps({k: v for k, v in zip(header, row)}) + "\n"
            )


def render_to_string(writer, *args) -> str:
    """Run any of the write_* functions into a string (testing convenience)."""
    buffer = io.StringIO()
    writer(*args, buffer)
    return buffer.getvalue()
