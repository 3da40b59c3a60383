import csv
import logging
import os
from typing import Iterable, List, Sequence

from autoindex.errors import FactFileError

logger = logging.getLogger(__name__)

# fields are taken literally on both sides: no quoting, no escaping
csv.register_dialect("facts", delimiter="\t", quoting=csv.QUOTE_NONE, quotechar=None, lineterminator="\n")

FORBIDDEN = ("\t", "\n", "\r")


def read_facts(path: str, arity: int) -> List[List[str]]:
    """Rows of a tab-separated fact file; blank lines are skipped."""
    if not os.path.isfile(path):
        raise FactFileError(f"fact file not found: {path}")
    rows = []
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            for lineno, row in enumerate(csv.reader(handle, dialect="facts"), start=1):
                if not row or row == [""]:
                    continue
                if len(row) != arity:
                    raise FactFileError(f"{path}:{lineno}: expected {arity} columns, found {len(row)}")
                rows.append(row)
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise FactFileError(f"cannot read {path}: {e}") from e
    logger.debug(f"read {len(rows)} rows from {path}")
    return rows


def _check_row(path: str, row: Sequence[str]) -> Sequence[str]:
    for value in row:
        if any(c in value for c in FORBIDDEN):
            raise FactFileError(f"{path}: value {value!r} contains a tab or line break")
    return row


def write_facts(path: str, rows: Iterable[Sequence[str]]) -> int:
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        count = 0
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, dialect="facts")
            for row in rows:
                writer.writerow(_check_row(path, row))
                count += 1
    except (OSError, csv.Error) as e:
        raise FactFileError(f"cannot write {path}: {e}") from e
    logger.info(f"wrote {count} rows to {path}")
    return count
