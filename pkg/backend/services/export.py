import csv
import json
import logging
from typing import Any, Dict, Iterable, List, Optional, TextIO

from ..models import DensityReport, EpRecord

logger = logging.getLogger(__name__)

CSV_FIELDS = ['q', 'p', 'chi', 'chi4', 'u', 'v', 'e', 'h', 'v2h', 'agree']
NA = 'NA'


def _cell(value: Any) -> str:
    if value is None:
        return NA
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return str(value)


def _parse(field: str, text: str) -> Any:
    if text == NA:
        return None
    if field == 'agree':
        if text not in ('true', 'false'):
            raise ValueError(f"agree must be true, false or NA, got {text!r}")
        return text == 'true'
    return int(text)


def write_csv(records: Iterable[EpRecord], stream: TextIO) -> int:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_FIELDS)
    count = 0
    for record in records:
        writer.writerow([_cell(getattr(record, field)) for field in CSV_FIELDS])
        count += 1
    return count


def read_csv(stream: TextIO) -> List[EpRecord]:
    reader = csv.DictReader(stream)
    if reader.fieldnames != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}, expected {CSV_FIELDS}")
    return [EpRecord(**{field: _parse(field, row[field]) for field in CSV_FIELDS}) for row in reader]


def build_json_report(reports: List[DensityReport], records: Optional[List[EpRecord]] = None) -> Dict[str, Any]:
    # no timestamps: equal runs must give equal bytes
    data: Dict[str, Any] = {
        "reports": [report.model_dump() for report in reports],
    }
    if records is not None:
        data["record_count"] = len(records)
        data["records"] = [record.model_dump() for record in records]
    return data


def write_json(reports: List[DensityReport], stream: TextIO, records: Optional[List[EpRecord]] = None):
    json.dump(build_json_report(reports, records), stream, indent=2, default=str)
    stream.write('\n')
