"""Degree-indexed prime bounds C(n) computed from tables of imaginary
quadratic discriminants.

For a CM elliptic curve over a degree-n field F with [F(E[ell]) : F(mu_ell)]
a power of ell, either ell <= 3n + 1 or ell divides d_K for a field K of
class number at most n. C(n) is the largest prime allowed by either clause.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from cmrt.arith import (
    is_fundamental_discriminant,
    largest_prime_at_most,
    largest_prime_factor,
)
from cmrt.errors import DataFileError, DomainError, TableParseError, TableVerificationError
from cmrt.fields import roots_of_unity_count
from cmrt.forms import class_number, fundamental_class_numbers

__all__ = [
    "BoundResult",
    "CompletenessReport",
    "DiscriminantTable",
    "MaxDiscTable",
    "Witness",
    "bound_table",
    "data_dir",
    "dump_maxtable",
    "dump_table",
    "exact_bound",
    "load_maxtable",
    "load_table",
    "rough_bound",
    "verify_completeness",
    "verify_maxtable_scan",
]

TABLE_FILE = "discs_h_le_7.csv"
MAXTABLE_FILE = "watkins_max.csv"
TABLE_HEADER = "h,abs_d"
MAXTABLE_HEADER = "h,max_abs_d"
MAXTABLE_RANGE = range(1, 101)


def data_dir() -> Path:
    """``$CMRT_DATA_DIR`` if set, else the data directory shipped with the package."""
    env = os.environ.get("CMRT_DATA_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files("cmrt") / "data"))


# -- tables --------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminantTable:
    rows: tuple[tuple[int, int], ...]
    declared_complete_through: int

    def abs_discs(self, max_h: int) -> list[int]:
        return [d for h, d in self.rows if h <= max_h]

    def truncated(self, max_h: int) -> DiscriminantTable:
        return DiscriminantTable(tuple(r for r in self.rows if r[0] <= max_h), min(max_h, self.declared_complete_through))

    def without(self, abs_d: int) -> DiscriminantTable:
        return DiscriminantTable(tuple(r for r in self.rows if r[1] != abs_d), self.declared_complete_through)


@dataclass(frozen=True)
class MaxDiscTable:
    rows: tuple[tuple[int, int], ...]

    def max_abs_d(self, h: int) -> int:
        return self.rows[h - 1][1]


def _read_text(path) -> tuple[str, str]:
    path = Path(path)
    try:
        return path.read_text(encoding="ascii"), str(path)
    except FileNotFoundError:
        raise DataFileError(f"data file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise DataFileError(f"cannot read {path}: {exc}") from None


def _parse_csv(text: str, header: str, source: str) -> tuple[list[tuple[int, int]], dict[str, str]]:
    meta: dict[str, str] = {}
    rows: list[tuple[int, int]] = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        if not seen_header:
            if line != header:
                raise TableParseError(f"{source}:{lineno}: expected header {header!r}, got {line!r}")
            seen_header = True
            continue
        parts = line.split(",")
        try:
            if len(parts) != 2:
                raise ValueError
            h, d = int(parts[0]), int(parts[1])
        except ValueError:
            raise TableParseError(f"{source}:{lineno}: malformed row {line!r}") from None
        if h < 1 or d < 1:
            raise TableParseError(f"{source}:{lineno}: values must be positive, got {line!r}")
        rows.append((h, d))
    if not seen_header:
        raise TableParseError(f"{source}: no header line {header!r}")
    return rows, meta


def _verify_rows(rows, source: str, workers: int | None, backend) -> None:
    def check(row):
        h, d = row
        if not is_fundamental_discriminant(-d):
            return f"{source}: row ({h}, {d}): -{d} is not a fundamental discriminant"
        actual = class_number(-d, backend=backend)
        if actual != h:
            return f"{source}: row ({h}, {d}): class number of -{d} is {actual}, not {h}"
        return None

    if workers == 1:
        problems = list(map(check, rows))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            problems = list(pool.map(check, rows))
    for msg in problems:
        if msg:
            raise TableVerificationError(msg)


def parse_table(text: str, source: str = "<string>", verify: bool = True, workers: int | None = 1,
                backend=None) -> DiscriminantTable:
    rows, meta = _parse_csv(text, TABLE_HEADER, source)
    if "complete_through" not in meta:
        raise TableParseError(f"{source}: missing '# complete_through=<h>' line")
    try:
        complete = int(meta["complete_through"])
    except ValueError:
        raise TableParseError(f"{source}: bad complete_through value {meta['complete_through']!r}") from None
    if len(set(rows)) != len(rows) or len({d for _, d in rows}) != len(rows):
        raise TableParseError(f"{source}: duplicate discriminant")
    rows.sort()
    if verify:
        _verify_rows(rows, source, workers, backend)
    return DiscriminantTable(tuple(rows), complete)


def load_table(path=None, verify: bool = True, workers: int | None = 1, backend=None) -> DiscriminantTable:
    """Read an ``h,abs_d`` table and recompute every row's class number."""
    text, source = _read_text(path if path is not None else data_dir() / TABLE_FILE)
    return parse_table(text, source, verify=verify, workers=workers, backend=backend)


def dump_table(table: DiscriminantTable) -> str:
    lines = [f"# complete_through={table.declared_complete_through}", TABLE_HEADER]
    lines += [f"{h},{d}" for h, d in sorted(table.rows)]
    return "\n".join(lines) + "\n"


def parse_maxtable(text: str, source: str = "<string>", verify: bool = True, backend=None) -> MaxDiscTable:
    rows, _ = _parse_csv(text, MAXTABLE_HEADER, source)
    rows.sort()
    if [h for h, _ in rows] != list(MAXTABLE_RANGE):
        raise TableParseError(f"{source}: need exactly one row for each h in 1..100")
    if verify:
        _verify_rows(rows, source, 1, backend)
    return MaxDiscTable(tuple(rows))


def load_maxtable(path=None, verify: bool = True, backend=None) -> MaxDiscTable:
    """Read an ``h,max_abs_d`` table; with ``verify`` each row's class number is recomputed.

    Maximality itself is only checkable up to a scan limit, see
    :func:`verify_maxtable_scan`.
    """
    text, source = _read_text(path if path is not None else data_dir() / MAXTABLE_FILE)
    return parse_maxtable(text, source, verify=verify, backend=backend)


def dump_maxtable(table: MaxDiscTable) -> str:
    return "\n".join([MAXTABLE_HEADER] + [f"{h},{d}" for h, d in table.rows]) + "\n"


# -- completeness --------------------------------------------------------


@dataclass(frozen=True)
class CompletenessReport:
    scan_limit: int
    complete_through: int
    fields_scanned: int
    fields_found: int
    missing: tuple[tuple[int, int], ...]
    note: str

    def as_dict(self) -> dict:
        return {
            "scan_limit": self.scan_limit,
            "complete_through": self.complete_through,
            "fields_scanned": self.fields_scanned,
            "fields_found": self.fields_found,
            "missing": [list(m) for m in self.missing],
            "note": self.note,
        }


def verify_completeness(table: DiscriminantTable, scan_limit: int = 10_000, backend=None) -> CompletenessReport:
    """Check that every fundamental ``-d`` with ``d <= scan_limit`` and class number
    at most ``declared_complete_through`` is listed."""
    biggest = max((d for _, d in table.rows), default=0)
    if scan_limit < biggest:
        raise DomainError(f"scan limit {scan_limit} is below the largest listed |d| = {biggest}")
    listed = set(table.rows)
    scanned = fundamental_class_numbers(scan_limit, backend=backend)
    wanted = [(h, d) for d, h in scanned if h <= table.declared_complete_through]
    missing = tuple(sorted(r for r in wanted if r not in listed))
    if missing:
        shown = ", ".join(f"-{d} (h={h})" for h, d in missing)
        raise TableVerificationError(f"table is missing {len(missing)} discriminant(s): {shown}")
    return CompletenessReport(
        scan_limit=scan_limit,
        complete_through=table.declared_complete_through,
        fields_scanned=len(scanned),
        fields_found=len(wanted),
        missing=(),
        note=(
            f"membership re-derived for |d| <= {scan_limit}; that no field with "
            f"h <= {table.declared_complete_through} lies beyond the limit rests on "
            "the published solutions of the class number problem"
        ),
    )


def verify_maxtable_scan(table: MaxDiscTable, scan_limit: int, backend=None) -> dict[int, int]:
    """For each h, the largest fundamental ``|d| <= scan_limit`` with class number h.

    Raises if that scan finds a larger discriminant than the table claims is
    maximal. Returns the scanned maxima (0 when none was found).
    """
    found = {h: 0 for h in MAXTABLE_RANGE}
    for d, h in fundamental_class_numbers(scan_limit, backend=backend):
        if h in found:
            found[h] = d
    for h, claimed in table.rows:
        if found[h] > claimed:
            raise TableVerificationError(f"h={h}: -{found[h]} has class number {h} but the table maximum is {claimed}")
        if claimed <= scan_limit and found[h] != claimed:
            raise TableVerificationError(f"h={h}: scan up to {scan_limit} found maximum {found[h]}, table says {claimed}")
    return found


# -- bounds --------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Why C(n) is at least ``prime``.

    kind ``"divides"``: prime divides abs_d, a field discriminant of class number h.
    kind ``"small"``: prime <= (w/2) n + 1.
    kind ``"at_most"``: prime <= abs_d (rough bound; no divisibility claimed).
    """

    kind: str
    prime: int
    abs_d: int | None = None
    h: int | None = None

    def as_dict(self) -> dict:
        return {"kind": self.kind, "prime": self.prime, "abs_d": self.abs_d, "h": self.h}


@dataclass(frozen=True)
class BoundResult:
    n: int
    c_n: int
    witness: Witness
    method: str  # "Exact" or "Rough"

    def as_dict(self) -> dict:
        return {"n": self.n, "C(n)": self.c_n, "method": self.method, "witness": self.witness.as_dict()}


def _check_degree(n: int, top: int) -> None:
    if not 1 <= n <= top:
        raise DomainError(f"degree must be in 1..{top}, got {n}")


def exact_bound(n: int, table: DiscriminantTable, per_field_units: bool = False) -> BoundResult:
    """C(n) = max(largest prime <= 3n + 1, largest prime factor of any |d_K| with h_K <= n).

    ``per_field_units`` replaces 3n + 1 by (w_K/2) n + 1 field by field.
    """
    _check_degree(n, 7)
    if n > table.declared_complete_through:
        raise DomainError(f"table is complete only through h = {table.declared_complete_through}, need {n}")
    best: Witness | None = None
    for h, d in table.rows:
        if h > n:
            continue
        p = largest_prime_factor(d)
        if best is None or p > best.prime:
            best = Witness("divides", p, d, h)
    if per_field_units:
        w = max(roots_of_unity_count(-d) for d in table.abs_discs(n))
    else:
        w = 6  # w_K <= 6 for every imaginary quadratic field
    small = Witness("small", largest_prime_at_most((w // 2) * n + 1))
    if best is None or small.prime > best.prime:
        best = small
    return BoundResult(n=n, c_n=best.prime, witness=best, method="Exact")


def rough_bound(n: int, table: MaxDiscTable) -> BoundResult:
    """Upper bound for C(n), n <= 100, from the largest |d_K| with h_K <= n alone:
    every prime factor of such a d_K is at most the largest prime <= max |d_K|."""
    _check_degree(n, 100)
    h_top, d_top = max(((h, d) for h, d in table.rows if h <= n), key=lambda r: (r[1], -r[0]))
    best = Witness("at_most", largest_prime_at_most(d_top), d_top, h_top)
    small = largest_prime_at_most(3 * n + 1)
    if small > best.prime:
        best = Witness("small", small)
    return BoundResult(n=n, c_n=best.prime, witness=best, method="Rough")


def bound_table(n_max: int, table: DiscriminantTable) -> list[BoundResult]:
    _check_degree(n_max, 7)
    return [exact_bound(n, table) for n in range(1, n_max + 1)]
