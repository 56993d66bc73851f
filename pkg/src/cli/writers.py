"""
Dataset writers: CSV through pandas and JSON-lines.

Data sections depend only on the command and its results. Timestamps and
other run metadata go to a separate block: the first line of a JSON-lines
file, or a ``<out>.meta.json`` sidecar next to a CSV file.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence, TextIO

import pandas as pd

from ..core.records import COLUMNS, ResultRecord

logger = logging.getLogger(__name__)

FORMATS = ("csv", "jsonl")


def build_metadata(command: Sequence[str], digits: int, version: str,
                   extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    metadata: Dict[str, Any] = {
        "version": version,
        "precision": digits,
        "command": list(command),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        metadata.update(extra)
    return metadata


def records_frame(records: List[ResultRecord], digits: int) -> pd.DataFrame:
    return pd.DataFrame([record.to_row(digits) for record in records], columns=COLUMNS, dtype=str)


def write_csv(records: List[ResultRecord], digits: int, metadata: Dict[str, Any],
              path: Optional[str] = None, metadata_suffix: str = ".meta.json",
              stream: Optional[TextIO] = None) -> None:
    """Write records as UTF-8 CSV with a header row; metadata goes to a sidecar file."""
    frame = records_frame(records, digits)
    if path is None:
        frame.to_csv(stream or sys.stdout, index=False)
        return
    frame.to_csv(path, index=False, encoding="utf-8")
    with open(path + metadata_suffix, "w", encoding="utf-8") as handle:
        json.dump(metadata, handle, indent=2)
    logger.info("wrote %d records to %s", len(records), path)


def write_jsonl(records: List[ResultRecord], digits: int, metadata: Dict[str, Any],
                path: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    """Write a metadata prologue line followed by one JSON object per record."""
    lines = [json.dumps({"metadata": metadata})]
    lines.extend(json.dumps(record.to_row(digits)) for record in records)
    text = "\n".join(lines) + "\n"
    if path is None:
        (stream or sys.stdout).write(text)
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info("wrote %d records to %s", len(records), path)


def write_records(records: List[ResultRecord], digits: int, metadata: Dict[str, Any],
                  fmt: str = "csv", path: Optional[str] = None,
                  metadata_suffix: str = ".meta.json", stream: Optional[TextIO] = None) -> None:
    if fmt == "csv":
        write_csv(records, digits, metadata, path, metadata_suffix, stream)
    elif fmt == "jsonl":
        write_jsonl(records, digits, metadata, path, stream)
    else:
        raise ValueError(f"unknown output format {fmt!r}; use one of {FORMATS}")


def read_guides(path: str) -> List[Dict[str, str]]:
    """
    Guide positions ±|λ_EP| from a JSON-lines file written by the eps command.

    Returns:
        One entry per exceptional-point record: sector, branch and modulus.
    """
    guides = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            if "metadata" in entry or entry.get("kind") != "exceptional":
                continue
            if entry.get("status") != "ok" or not entry.get("modulus"):
                continue
            guides.append({"sector": entry.get("sector", ""), "branch": entry.get("branch", ""),
                           "modulus": entry["modulus"]})
    return guides
