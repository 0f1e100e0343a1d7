# Trace, session and hot-set file persistence
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.core.exceptions import MalformedRecordError, TraceParseError
from app.modules.cache.schemas import ObjectId
from app.modules.workload.schemas import Ingested, SessionRecord, Trace

SESSION_COLUMNS = ["start", "end", "content_id"]

PathLike = Union[str, Path]


def _read_ids(path: PathLike) -> list[ObjectId]:
    """
    Read one non-negative decimal id per line.

    Raises:
        TraceParseError: On the first line that is not a non-negative integer
        OSError: If the file cannot be read
    """
    ids: list[ObjectId] = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            text = line.strip()
            if not (text.isascii() and text.isdigit()):
                raise TraceParseError(f"expected a non-negative integer id, got {text!r}", line_no, str(path))
            ids.append(int(text))
    return ids


def read_trace(path: PathLike) -> Trace:
    """Load a trace file (one decimal id per line)."""
    requests = np.asarray(_read_ids(path), dtype=np.int64)
    return Trace(requests=requests, provenance=Ingested(source=str(path)))


def write_trace(trace: Trace, path: PathLike) -> Path:
    """Write a trace file; line count equals request count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, trace.requests, fmt="%d")
    return path


def read_hot_set(path: PathLike) -> frozenset[ObjectId]:
    """Load an externally supplied hot set (one id per line)."""
    return frozenset(_read_ids(path))


def read_sessions(path: PathLike) -> list[SessionRecord]:
    """
    Load a session CSV with header start,end,content_id.

    Raises:
        MalformedRecordError: Wrong header, missing fields, non-integer values
            or end before start (with the 1-based file line number)
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise MalformedRecordError("missing header start,end,content_id", 1, str(path))
    except pd.errors.ParserError as e:
        raise MalformedRecordError(f"unparseable CSV: {e}", None, str(path))

    if list(frame.columns) != SESSION_COLUMNS:
        raise MalformedRecordError(
            f"header must be {','.join(SESSION_COLUMNS)}, got {','.join(map(str, frame.columns))}",
            1,
            str(path),
        )

    records: list[SessionRecord] = []
    for index, row in enumerate(frame.fillna("").itertuples(index=False)):
        line_no = index + 2  # header is line 1; blank lines keep their rows
        start, end, content = (str(value).strip() for value in row)
        if not (start or end or content):
            continue
        if not (start and end and content):
            raise MalformedRecordError("missing field", line_no, str(path))
        try:
            records.append(SessionRecord(start=int(start), end=int(end), content=int(content)))
        except ValueError as e:
            # ValidationError is a ValueError too
            detail = e.errors()[0]["msg"] if isinstance(e, ValidationError) else str(e)
            raise MalformedRecordError(detail, line_no, str(path))
    return records
