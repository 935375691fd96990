from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any
import shutil
import time
from uuid import uuid4

import yaml


KIND_VERIFY = "verify"
KIND_DIMENSION = "dimension"
KIND_MATRIX = "matrix"
KIND_ENTROPY = "entropy"
REPORT_KINDS = (KIND_VERIFY, KIND_DIMENSION, KIND_MATRIX, KIND_ENTROPY)
WRITE_ATTEMPTS = 3


@dataclass(frozen=True)
class ReportRecord:
    report_id: str
    kind: str
    subject: str
    created_at: datetime
    passed: bool
    payload: dict[str, Any] = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "report_id": self.report_id,
            "kind": self.kind,
            "subject": self.subject,
            "created_at": self.created_at.isoformat(timespec="seconds"),
            "passed": bool(self.passed),
            "payload": self.payload,
        }

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "ReportRecord":
        kind = str(data["kind"])
        if kind not in REPORT_KINDS:
            raise ValueError(f"unknown report kind: {kind}")
        payload = data.get("payload")
        return ReportRecord(
            report_id=str(data["report_id"]),
            kind=kind,
            subject=str(data["subject"]),
            created_at=datetime.fromisoformat(str(data["created_at"])),
            passed=bool(data.get("passed", False)),
            payload=payload if isinstance(payload, dict) else {},
        )


class ReportStorageError(RuntimeError):
    pass


class ReportYamlRepository:
    def __init__(self, base_dir: str | Path = "data") -> None:
        self.base_dir = Path(base_dir)
        self.reports_file = self.base_dir / "reports.yaml"
        self.log_file = self.base_dir / "report_events.yaml"
        self._ensure_files()

    def _ensure_files(self) -> None:
        self.base_dir.mkdir(parents=True, exist_ok=True)
        for path in (self.reports_file, self.log_file):
            if not path.exists():
                path.write_text("[]\n", encoding="utf-8")

    def _read_yaml_list(self, path: Path) -> list[dict[str, Any]]:
        try:
            payload = yaml.safe_load(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            path.write_text("[]\n", encoding="utf-8")
            return []
        except (OSError, UnicodeDecodeError, yaml.YAMLError) as error:
            self._recover_corrupted_yaml(path, error)
            return []

        if payload is None:
            return []
        if not isinstance(payload, list):
            self._recover_corrupted_yaml(path, ValueError("top-level YAML is not a list"))
            return []

        rows: list[dict[str, Any]] = []
        for index, row in enumerate(payload):
            if isinstance(row, dict):
                rows.append(row)
            elif path != self.log_file:
                self._log_event(
                    "YAML_ROW_SKIPPED",
                    {"file": path.name, "index": index, "reason": "row is not a mapping"},
                )
        return rows

    def _write_yaml_list(self, path: Path, rows: list[dict[str, Any]]) -> None:
        last_error: OSError | None = None
        for attempt in range(WRITE_ATTEMPTS):
            temp_path = path.with_name(f"{path.name}.{uuid4().hex}.tmp")
            try:
                temp_path.write_text(yaml.safe_dump(rows, allow_unicode=True, sort_keys=False), encoding="utf-8")
                temp_path.replace(path)
                return
            except OSError as error:
                last_error = error
                temp_path.unlink(missing_ok=True)
                if attempt < WRITE_ATTEMPTS - 1:
                    time.sleep(0.05 * (attempt + 1))
        raise ReportStorageError(f"Failed to write YAML file: {path}") from last_error

    def _recover_corrupted_yaml(self, path: Path, error: Exception) -> None:
        timestamp = datetime.now().strftime("%Y%m%d%H%M%S")
        backup_path = path.with_name(f"{path.stem}.corrupt.{timestamp}{path.suffix}")
        try:
            if path.exists():
                shutil.copy2(path, backup_path)
        except OSError:
            pass

        path.write_text("[]\n", encoding="utf-8")
        if path != self.log_file:
            self._log_event(
                "YAML_RECOVERED",
                {"file": path.name, "backup": backup_path.name, "reason": str(error)},
            )

    def _log_event(self, event_type: str, payload: dict[str, Any], event_time: datetime | None = None) -> None:
        timestamp = (event_time or datetime.now()).isoformat(timespec="seconds")
        events = self._read_yaml_list(self.log_file)
        events.append({"event_time": timestamp, "event_type": event_type, "payload": payload})
        self._write_yaml_list(self.log_file, events)

    def get_events(self) -> list[dict[str, Any]]:
        return self._read_yaml_list(self.log_file)

    def get_reports(self, kind: str | None = None) -> list[ReportRecord]:
        records = []
        for index, row in enumerate(self._read_yaml_list(self.reports_file)):
            try:
                record = ReportRecord.from_dict(row)
            except (KeyError, TypeError, ValueError) as error:
                self._log_event(
                    "YAML_ROW_SKIPPED",
                    {"file": self.reports_file.name, "index": index, "reason": str(error)},
                )
                continue
            if kind is None or record.kind == kind:
                records.append(record)
        return records

    def get_report(self, report_id: str) -> ReportRecord | None:
        for record in self.get_reports():
            if record.report_id == report_id:
                return record
        return None

    def add_report(
        self,
        kind: str,
        subject: str,
        passed: bool,
        payload: dict[str, Any] | None = None,
        now: datetime | None = None,
    ) -> ReportRecord:
        if kind not in REPORT_KINDS:
            raise ValueError(f"unknown report kind: {kind} (expected one of {', '.join(REPORT_KINDS)})")
        subject = str(subject).strip()
        if not subject:
            raise ValueError("report subject must not be empty")
        effective_now = now or datetime.now()
        record = ReportRecord(
            report_id=str(uuid4()),
            kind=kind,
            subject=subject,
            created_at=effective_now,
            passed=bool(passed),
            payload=dict(payload or {}),
        )
        rows = self._read_yaml_list(self.reports_file)
        rows.append(record.to_dict())
        self._write_yaml_list(self.reports_file, rows)
        self._log_event(
            "REPORT_SAVED",
            {"report_id": record.report_id, "kind": kind, "subject": subject, "passed": record.passed},
            effective_now,
        )
        return record

    def delete_report(self, report_id: str, *, now: datetime | None = None) -> ReportRecord:
        rows = self._read_yaml_list(self.reports_file)
        remaining: list[dict[str, Any]] = []
        deleted: ReportRecord | None = None
        for row in rows:
            if str(row.get("report_id")) == report_id:
                deleted = ReportRecord.from_dict(row)
            else:
                remaining.append(row)

        if deleted is None:
            raise ValueError("report_id not found")

        self._write_yaml_list(self.reports_file, remaining)
        self._log_event(
            "REPORT_DELETED",
            {"report_id": report_id, "kind": deleted.kind, "subject": deleted.subject},
            now,
        )
        return deleted

    def log_failure(self, subject: str, error: Exception, now: datetime | None = None) -> None:
        self._log_event(
            "COMPUTATION_FAILED",
            {"subject": subject, "error": type(error).__name__, "message": str(error)},
            now,
        )
