"""File formats: payoff tables, schedules, trajectories, manifests.

All formats are plain CSV or JSON and are documented byte-for-byte in the
README. Payoffs and rotation values are written as exact rational strings
("-5/6", "2", "0.89") and parsed back with fractions.Fraction, so a
save/load round trip changes nothing.
"""

from __future__ import annotations

import csv
import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .agents import (
    LogitFictitiousPlay,
    ProportionalImitation,
    Schedule,
    ScheduleEntry,
    SimConfig,
)
from .errors import NonContiguousRounds, ParseError, ValidationError
from .games import PayoffMatrix
from .rotation import PopulationState, RotationReport, Trajectory

_MATRIX_COLS = ("m11", "m12", "m21", "m22")


def parse_rational(text: str, where: str = "") -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: bad rational {text!r}") from exc


def fmt_number(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def data_path(name: str) -> Path:
    """Path of a data file bundled with the package."""
    return Path(resources.files("evorot") / "data" / name)


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


# -- payoff matrices ---------------------------------------------------------


def load_matrices(path) -> dict[str, PayoffMatrix]:
    """Read a game table: columns game,m11,m12,m21,m22 (row-major payoffs)."""
    out: dict[str, PayoffMatrix] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "game" not in reader.fieldnames or any(
            c not in reader.fieldnames for c in _MATRIX_COLS
        ):
            raise ParseError(f"{path}: expected header game,{','.join(_MATRIX_COLS)}")
        for i, row in enumerate(reader, start=2):
            gid = (row["game"] or "").strip()
            if not gid:
                raise ParseError(f"{path}:{i}: missing game id")
            if gid in out:
                raise ParseError(f"{path}:{i}: duplicate game id {gid!r}")
            vals = [parse_rational(row[c], f"{path}:{i}") for c in _MATRIX_COLS]
            out[gid] = PayoffMatrix.from_rows([vals[:2], vals[2:]])
    if not out:
        raise ParseError(f"{path}: no games found")
    return out


def load_schedule(path) -> Schedule:
    """Read a schedule: columns game,m11,m12,m21,m22,rounds, in play order."""
    entries = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        need = ("game",) + _MATRIX_COLS + ("rounds",)
        if reader.fieldnames is None or any(c not in reader.fieldnames for c in need):
            raise ParseError(f"{path}: expected header {','.join(need)}")
        for i, row in enumerate(reader, start=2):
            gid = (row["game"] or "").strip()
            vals = [parse_rational(row[c], f"{path}:{i}") for c in _MATRIX_COLS]
            try:
                rounds = int(row["rounds"])
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{i}: bad round count {row['rounds']!r}") from exc
            entries.append(
                ScheduleEntry(gid, PayoffMatrix.from_rows([vals[:2], vals[2:]]), rounds)
            )
    return Schedule(tuple(entries))


# -- trajectories ------------------------------------------------------------


def save_trajectory(traj: Trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# N={traj.n_agents}\n")
        fh.write(f"# group={traj.group_id}\n")
        fh.write(f"# game={traj.game_id}\n")
        fh.write("t,p_count,q_count\n")
        for t, s in enumerate(traj.states):
            fh.write(f"{t},{s.p_count},{s.q_count}\n")


def load_trajectory(path) -> Trajectory:
    """Read a trajectory file; enforces the lattice and round invariants."""
    header: dict[str, str] = {}
    states: list[PopulationState] = []
    with open(path) as fh:
        lineno = 0
        line = ""
        for raw in fh:
            lineno += 1
            line = raw.strip()
            if not line.startswith("#"):
                break
            key, sep, value = line[1:].partition("=")
            if not sep:
                raise ParseError(f"{path}:{lineno}: header line without '='")
            header[key.strip()] = value.strip()
        else:
            raise ParseError(f"{path}: empty file")
        if line != "t,p_count,q_count":
            raise ParseError(f"{path}:{lineno}: expected column line t,p_count,q_count")
        try:
            n = int(header["N"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"{path}: header must declare integer N") from exc
        expected_t = 0
        for raw in fh:
            lineno += 1
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
            try:
                t, pc, qc = (int(v) for v in parts)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-integer field") from exc
            if t != expected_t:
                raise NonContiguousRounds(
                    f"{path}:{lineno}: round {t}, expected {expected_t}"
                )
            expected_t += 1
            states.append(PopulationState(pc, qc, n))  # raises LatticeViolation
    if not states:
        raise ParseError(f"{path}: no state rows")
    return Trajectory(
        tuple(states), group_id=header.get("group", ""), game_id=header.get("game", "")
    )


# -- rotation tables ---------------------------------------------------------


def load_l_table(path) -> tuple[list[str], dict[str, list[Fraction]]]:
    """Read an accumulated-rotation table: header game,<group...>, one row
    per game, exact rational entries. Returns (group_labels, {game: values})."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if not header or header[0] != "game" or len(header) < 2:
            raise ParseError(f"{path}: expected header game,<group>,...")
        groups = [h.strip() for h in header[1:]]
        table: dict[str, list[Fraction]] = {}
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(groups) + 1:
                raise ParseError(f"{path}:{i}: expected {len(groups) + 1} fields")
            gid = row[0].strip()
            if gid in table:
                raise ParseError(f"{path}:{i}: duplicate game id {gid!r}")
            table[gid] = [parse_rational(v, f"{path}:{i}") for v in row[1:]]
    if not table:
        raise ParseError(f"{path}: no game rows")
    return groups, table


def save_l_table(groups: Sequence[str], table: Mapping[str, Sequence], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["game"] + list(groups))
        for gid, row in table.items():
            writer.writerow([gid] + [fmt_number(v) for v in row])


def save_group_vector(groups: Sequence[str], values: Sequence, name: str, path) -> None:
    """One labeled value per group, e.g. the response coefficients."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", name])
        for g, v in zip(groups, values):
            writer.writerow([g, fmt_number(v)])


# -- rotation reports --------------------------------------------------------


def report_text(report: RotationReport) -> str:
    lines = [
        f"group: {report.group_id}",
        f"game: {report.game_id}",
        f"rounds: {report.n_rounds}",
        f"transitions: {len(report.l_series)}",
        f"l_accumulated: {fmt_number(report.l_accumulated)}",
        f"l_mean: {fmt_number(report.l_mean)}",
    ]
    if report.crossings is not None:
        cct, ct = report.crossings
        lines += [
            f"cri: {report.cri}",
            f"crossings_ccw: {cct}",
            f"crossings_cw: {ct}",
        ]
    if report.avg_distance is not None:
        lines.append(f"avg_distance: {report.avg_distance}")
    return "\n".join(lines) + "\n"


def save_reports_csv(reports: Sequence[RotationReport], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["group", "game", "rounds", "l_accumulated", "l_mean",
             "cri", "crossings_ccw", "crossings_cw", "avg_distance"]
        )
        for r in reports:
            cct, ct = r.crossings if r.crossings is not None else ("", "")
            writer.writerow(
                [r.group_id, r.game_id, r.n_rounds,
                 fmt_number(r.l_accumulated), fmt_number(r.l_mean),
                 "" if r.cri is None else r.cri, cct, ct,
                 "" if r.avg_distance is None else r.avg_distance]
            )


# -- simulation config and manifest ------------------------------------------


def config_from_dict(d: Mapping, seed: int | None = None) -> SimConfig:
    d = dict(d)
    rule_name = d.pop("rule", "logit-fp")
    if rule_name == "logit-fp":
        rule = LogitFictitiousPlay(
            recency=float(d.pop("recency", 0.1)),
            precision=float(d.pop("precision", 10.0)),
        )
    elif rule_name == "imitation":
        rule = ProportionalImitation(rate=float(d.pop("rate", 1.0)))
    else:
        raise ParseError(f"unknown choice rule {rule_name!r}")
    file_seed = int(d.pop("seed", 0))
    cfg_seed = file_seed if seed is None else seed
    cfg = SimConfig(
        n_agents=int(d.pop("n_agents", 6)),
        seed=cfg_seed,
        rule=rule,
        tremble=float(d.pop("tremble", 0.01)),
    )
    if d:
        raise ParseError(f"unknown config keys: {sorted(d)}")
    return cfg


def config_to_dict(cfg: SimConfig) -> dict:
    out: dict = {"n_agents": cfg.n_agents, "seed": cfg.seed, "tremble": cfg.tremble}
    if isinstance(cfg.rule, LogitFictitiousPlay):
        out.update(rule="logit-fp", recency=cfg.rule.recency,
                   precision=cfg.rule.precision)
    else:
        out.update(rule="imitation", rate=cfg.rule.rate)
    return out


def load_config(path, seed: int | None = None) -> SimConfig:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: config must be a JSON object")
    try:
        return config_from_dict(raw, seed=seed)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_manifest(path, payload: Mapping, files: Sequence[Path]) -> None:
    """Write the run manifest last, after every listed file is on disk."""
    base = Path(path).parent
    doc = dict(payload)
    doc["files"] = [
        {"path": str(Path(f).relative_to(base)), "sha256": file_sha256(f)}
        for f in files
    ]
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def verify_manifest(path) -> dict:
    """Check every listed file exists and matches its checksum."""
    path = Path(path)
    with open(path) as fh:
        doc = json.load(fh)
    problems = []
    for item in doc.get("files", []):
        f = path.parent / item["path"]
        if not f.exists():
            problems.append(f"missing: {item['path']}")
        elif file_sha256(f) != item["sha256"]:
            problems.append(f"checksum mismatch: {item['path']}")
    if problems:
        raise ValidationError("; ".join(problems))
    return doc
