"""Two-line element set parsing, formatting, and orbit-regime classification.

A TLE block is a name line (optional, may be prefixed ``0 ``) followed by
two 69-character fixed-width data lines.  Both data lines carry a modulo-10
checksum in column 69: digits count their value, a minus sign counts one,
and every other character (letters, periods, plus signs, spaces) counts
zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, TextIO

from . import timebase
from .errors import InputError

MU_EARTH_KM3_S2 = 398600.4418
EARTH_RADIUS_KM = 6378.137
GEO_RADIUS_KM = 42164.0

LINE_LENGTH = 69


class TleParseError(InputError):
    """A TLE block failed validation; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line:{line}: {message}" if line is not None else message)


class EmptyCatalogError(InputError):
    pass


class UnknownActuatorError(InputError):
    pass


class OrbitRegime(Enum):
    LEO = "LEO"
    MEO = "MEO"
    GEO = "GEO"
    HEO = "HEO"


@dataclass(frozen=True)
class RegimeThresholds:
    """Classification boundaries; override to reproduce other groupings."""

    heo_min_eccentricity: float = 0.25
    geo_band_km: float = 200.0
    leo_max_apogee_alt_km: float = 2000.0


DEFAULT_THRESHOLDS = RegimeThresholds()


@dataclass(frozen=True)
class TleRecord:
    name: str
    norad_id: int
    classification: str
    intl_designator: str
    epoch_year: int  # two digits, pivot 57
    epoch_day: float  # fractional day of year, 1.0 = Jan 1 midnight
    mean_motion_dot: float  # rev/day^2, stored as the half field value
    mean_motion_ddot: float  # rev/day^3, stored as the sixth field value
    b_star: float  # inverse Earth radii
    ephemeris_type: int
    element_number: int
    inclination_deg: float
    raan_deg: float
    eccentricity: float
    arg_perigee_deg: float
    mean_anomaly_deg: float
    mean_motion_rev_per_day: float
    rev_number: int

    @property
    def epoch_ms(self) -> int:
        return timebase.epoch_ms_from_year_day(self.epoch_year, self.epoch_day)

    @property
    def mean_motion_rad_per_s(self) -> float:
        return self.mean_motion_rev_per_day * 2.0 * math.pi / 86400.0

    @property
    def semi_major_axis_km(self) -> float:
        n = self.mean_motion_rad_per_s
        return (MU_EARTH_KM3_S2 / (n * n)) ** (1.0 / 3.0)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line:{self.line}: {self.message}"


@dataclass
class Catalog:
    records: list[TleRecord] = field(default_factory=list)
    regime_index: dict[OrbitRegime, list[int]] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def by_norad(self, norad_id: int) -> TleRecord:
        for rec in self.records:
            if rec.norad_id == norad_id:
                return rec
        raise UnknownActuatorError(f"unknown NORAD id {norad_id}")

    def regime_counts(self) -> dict[str, int]:
        return {r.value: len(self.regime_index.get(r, [])) for r in OrbitRegime}


def checksum(line: str) -> int:
    """Modulo-10 checksum over the first 68 characters."""
    total = 0
    for ch in line[:LINE_LENGTH - 1]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def _parse_float(text: str, what: str, line: int | None) -> float:
    try:
        return float(text)
    except ValueError:
        raise TleParseError(f"unparseable {what} field {text!r}", line) from None


def _parse_int(text: str, what: str, line: int | None) -> int:
    stripped = text.strip()
    if not stripped:
        return 0
    try:
        return int(stripped)
    except ValueError:
        raise TleParseError(f"unparseable {what} field {text!r}", line) from None


def _parse_pointless(text: str, what: str, line: int | None) -> float:
    """Decode the assumed-decimal exponent fields, e.g. `` 27923-4``."""
    body = text.strip()
    if not body:
        return 0.0
    sign = 1.0
    if body[0] in "+-":
        sign = -1.0 if body[0] == "-" else 1.0
        body = body[1:]
    mantissa, exp = body[:-2], body[-2:]
    try:
        return sign * float(f"0.{mantissa}e{int(exp)}")
    except ValueError:
        raise TleParseError(f"unparseable {what} field {text!r}", line) from None


def _check_line(line: str, expected_first: str, line_no: int | None) -> None:
    if len(line) != LINE_LENGTH:
        raise TleParseError(
            f"data line has {len(line)} characters, expected {LINE_LENGTH}", line_no
        )
    if not line.startswith(expected_first + " "):
        raise TleParseError(f"expected line to start with {expected_first!r}", line_no)
    expected = checksum(line)
    if line[-1] != str(expected):
        raise TleParseError(
            f"checksum mismatch: expected {expected}, found {line[-1]!r}", line_no
        )


def parse_tle(block: Sequence[str], line_offset: int = 1) -> TleRecord:
    """Parse one TLE block: ``[name?, line1, line2]``.

    ``line_offset`` is the 1-based line number of the first block line,
    used to report errors against the source file.
    """
    lines = [ln.rstrip("\r\n") for ln in block]
    if len(lines) == 3:
        name_line, line1, line2 = lines
        name = name_line.strip()
        if name.startswith("0 "):
            name = name[2:].strip()
        no1, no2 = line_offset + 1, line_offset + 2
    elif len(lines) == 2:
        name = ""
        line1, line2 = lines
        no1, no2 = line_offset, line_offset + 1
    else:
        raise TleParseError(
            f"block must have 2 or 3 lines, got {len(lines)}", line_offset
        )

    _check_line(line1, "1", no1)
    _check_line(line2, "2", no2)

    norad_1 = _parse_int(line1[2:7], "NORAD id", no1)
    norad_2 = _parse_int(line2[2:7], "NORAD id", no2)
    if norad_1 != norad_2:
        raise TleParseError(
            f"NORAD id mismatch between lines: {norad_1} vs {norad_2}", no2
        )
    if norad_1 <= 0:
        raise TleParseError(f"NORAD id must be positive, got {norad_1}", no1)

    eccentricity = _parse_float("0." + line2[26:33], "eccentricity", no2)
    mean_motion = _parse_float(line2[52:63], "mean motion", no2)
    inclination = _parse_float(line2[8:16], "inclination", no2)
    if not 0.0 <= inclination <= 180.0:
        raise TleParseError(f"inclination {inclination} out of [0, 180]", no2)
    if not 0.0 <= eccentricity < 1.0:
        raise TleParseError(f"eccentricity {eccentricity} out of [0, 1)", no2)
    if mean_motion <= 0.0:
        raise TleParseError(f"mean motion must be positive, got {mean_motion}", no2)

    return TleRecord(
        name=name,
        norad_id=norad_1,
        classification=line1[7],
        intl_designator=line1[9:17].strip(),
        epoch_year=_parse_int(line1[18:20], "epoch year", no1),
        epoch_day=_parse_float(line1[20:32], "epoch day", no1),
        mean_motion_dot=_parse_float(line1[33:43].replace(" ", ""), "mean motion derivative", no1),
        mean_motion_ddot=_parse_pointless(line1[44:52], "mean motion second derivative", no1),
        b_star=_parse_pointless(line1[53:61], "B*", no1),
        ephemeris_type=_parse_int(line1[62:63], "ephemeris type", no1),
        element_number=_parse_int(line1[64:68], "element number", no1),
        inclination_deg=inclination,
        raan_deg=_parse_float(line2[17:25], "RAAN", no2),
        eccentricity=eccentricity,
        arg_perigee_deg=_parse_float(line2[34:42], "argument of perigee", no2),
        mean_anomaly_deg=_parse_float(line2[43:51], "mean anomaly", no2),
        mean_motion_rev_per_day=mean_motion,
        rev_number=_parse_int(line2[63:68], "revolution number", no2),
    )


def _format_pointless(value: float) -> str:
    """Inverse of :func:`_parse_pointless`; 8 characters."""
    if value == 0.0:
        return " 00000+0"
    sign = "-" if value < 0 else " "
    exp = math.floor(math.log10(abs(value))) + 1
    mantissa = round(abs(value) / 10.0 ** exp * 1e5)
    if mantissa >= 100000:  # rounding spilled over, bump the exponent
        mantissa //= 10
        exp += 1
    if not -9 <= exp <= 9:
        raise ValueError(f"exponent field out of range for {value}")
    return f"{sign}{mantissa:05d}{exp:+d}"


def format_tle(record: TleRecord, include_name: bool = True) -> list[str]:
    """Serialize a record to canonical fixed-width TLE text.

    The output re-parses to an identical record, and formatting a record
    parsed from this canonical form is byte-identical.
    """
    dot = record.mean_motion_dot
    dot_str = f"{'-' if dot < 0 else ' '}.{round(abs(dot) * 1e8):08d}"
    line1 = (
        f"1 {record.norad_id:05d}{record.classification}"
        f" {record.intl_designator:<8}"
        f" {record.epoch_year:02d}{record.epoch_day:012.8f}"
        f" {dot_str}"
        f" {_format_pointless(record.mean_motion_ddot)}"
        f" {_format_pointless(record.b_star)}"
        f" {record.ephemeris_type:1d}"
        f" {record.element_number:4d}"
    )
    line1 += str(checksum(line1))
    line2 = (
        f"2 {record.norad_id:05d}"
        f" {record.inclination_deg:08.4f}"
        f" {record.raan_deg:08.4f}"
        f" {round(record.eccentricity * 1e7):07d}"
        f" {record.arg_perigee_deg:08.4f}"
        f" {record.mean_anomaly_deg:08.4f}"
        f" {record.mean_motion_rev_per_day:11.8f}"
        f"{record.rev_number:5d}"
    )
    line2 += str(checksum(line2))
    lines = [line1, line2]
    if include_name:
        lines.insert(0, record.name)
    return lines


def classify_regime(
    record: TleRecord, thresholds: RegimeThresholds = DEFAULT_THRESHOLDS
) -> OrbitRegime:
    """Classify by semi-major axis and eccentricity.

    Highly elliptical wins first, then the geostationary band, then the
    low/medium split on apogee altitude.
    """
    if record.eccentricity >= thresholds.heo_min_eccentricity:
        return OrbitRegime.HEO
    a = record.semi_major_axis_km
    if abs(a - GEO_RADIUS_KM) <= thresholds.geo_band_km:
        return OrbitRegime.GEO
    apogee_alt = a * (1.0 + record.eccentricity) - EARTH_RADIUS_KM
    if apogee_alt < thresholds.leo_max_apogee_alt_km:
        return OrbitRegime.LEO
    return OrbitRegime.MEO


def _iter_blocks(lines: list[str]) -> Iterable[tuple[int, list[str]]]:
    """Yield (first_line_number, block_lines) for each TLE block.

    Format detection follows the leading character of the first non-blank
    line: ``1 `` means headerless 2-line blocks, anything else means
    3-line blocks with a name line.
    """
    content = [(i + 1, ln.rstrip("\r\n")) for i, ln in enumerate(lines)]
    content = [(no, ln) for no, ln in content if ln.strip()]
    if not content:
        return
    three_line = not content[0][1].startswith("1 ")
    size = 3 if three_line else 2
    for start in range(0, len(content), size):
        chunk = content[start:start + size]
        yield chunk[0][0], [ln for _, ln in chunk]


def load_catalog(
    source: str | TextIO,
    policy: str = "skip",
    thresholds: RegimeThresholds = DEFAULT_THRESHOLDS,
) -> Catalog:
    """Parse a stream of concatenated TLE blocks into a catalog.

    ``policy`` is ``"skip"`` (collect diagnostics, keep going) or
    ``"fail-fast"`` (raise on the first problem).  Duplicate NORAD ids
    are reported; under the skip policy the last occurrence wins.
    """
    if policy not in ("skip", "fail-fast"):
        raise InputError(f"unknown parse policy {policy!r}")
    text = source if isinstance(source, str) else source.read()
    lines = text.splitlines()
    blocks = list(_iter_blocks(lines))
    if not blocks:
        raise EmptyCatalogError("empty input: no TLE data found")

    catalog = Catalog()
    seen: dict[int, int] = {}  # norad -> index into records
    for line_no, block in blocks:
        try:
            record = parse_tle(block, line_offset=line_no)
        except TleParseError as exc:
            if policy == "fail-fast":
                raise
            catalog.diagnostics.append(
                Diagnostic(exc.line if exc.line is not None else line_no, exc.message)
            )
            continue
        if record.norad_id in seen:
            msg = f"duplicate NORAD id {record.norad_id}, keeping the last occurrence"
            if policy == "fail-fast":
                raise TleParseError(msg, line_no)
            catalog.diagnostics.append(Diagnostic(line_no, msg))
            del catalog.records[seen[record.norad_id]]
            seen = {r.norad_id: i for i, r in enumerate(catalog.records)}
        seen[record.norad_id] = len(catalog.records)
        catalog.records.append(record)

    catalog.regime_index = {r: [] for r in OrbitRegime}
    for idx, record in enumerate(catalog.records):
        catalog.regime_index[classify_regime(record, thresholds)].append(idx)
    return catalog
