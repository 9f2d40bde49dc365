"""
Export Service - JSON documents, CSV tables and workbooks
"""
import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import openpyxl

from ..models.experiment import SweepRow
from ..models.manifest import SCHEMA_VERSION, RunManifest
from ..models.weak import DiracDistribution

logger = logging.getLogger(__name__)

SWEEP_SHEET = 'Sweep'


def _json_safe(value):
    """nan/inf become null"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


class ExportService:
    """
    Writes results the way downstream plotting expects them: one header row per CSV,
    schema_version on every JSON document
    """

    def write_json(self, document: dict, path) -> Path:
        path = Path(path)
        payload = {'schema_version': SCHEMA_VERSION, **_json_safe(document)}
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + '\n', encoding='utf-8')
        logger.info(f"Wrote {path}")
        return path

    def dumps_json(self, document: dict) -> str:
        payload = {'schema_version': SCHEMA_VERSION, **_json_safe(document)}
        return json.dumps(payload, indent=2, sort_keys=True)

    def write_table(self, header: Sequence[str], rows: Iterable[Sequence], out: TextIO):
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)

    def write_csv(self, header: Sequence[str], rows: Iterable[Sequence], path) -> Path:
        path = Path(path)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            self.write_table(header, rows, f)
        logger.info(f"Wrote {path}")
        return path

    def matrix_rows(self, m) -> list:
        """(row, col, re, im) per entry"""
        return [[i, j, float(m[i][j].real), float(m[i][j].imag)] for i in range(2) for j in range(2)]

    def write_dirac_csv(self, dirac: DiracDistribution, path) -> Path:
        return self.write_csv(('row', 'col', 're', 'im'), self.matrix_rows(dirac.s), path)

    def write_matrix_csv(self, m, path) -> Path:
        return self.write_csv(('row', 'col', 're', 'im'), self.matrix_rows(m), path)

    def sweep_csv_text(self, rows: Sequence[SweepRow]) -> str:
        buffer = io.StringIO()
        self.write_table(SweepRow.HEADER, (row.as_row() for row in rows), buffer)
        return buffer.getvalue()

    def write_sweep_csv(self, rows: Sequence[SweepRow], path) -> Path:
        return self.write_csv(SweepRow.HEADER, (row.as_row() for row in rows), path)

    def write_sweep_workbook(self, rows: Sequence[SweepRow], path) -> Path:
        """Sweep table as a single-sheet workbook; nan cells are left empty"""
        path = Path(path)
        wb = openpyxl.Workbook()
        ws = wb.active
        ws.title = SWEEP_SHEET
        ws.append(list(SweepRow.HEADER))
        for row in rows:
            ws.append([_json_safe(value) if value != '' else None for value in row.as_row()])
        wb.save(path)
        logger.info(f"Wrote workbook {path} ({len(rows)} rows)")
        return path

    def read_sweep_workbook(self, path) -> list:
        """Rows of a sweep workbook as dicts keyed by header"""
        wb = openpyxl.load_workbook(path, data_only=True)
        ws = wb[SWEEP_SHEET] if SWEEP_SHEET in wb.sheetnames else wb.active
        headers = [cell.value for cell in ws[1]]
        return [dict(zip(headers, values)) for values in ws.iter_rows(min_row=2, values_only=True)]

    def write_manifest(self, manifest: RunManifest, out_dir) -> Path:
        path = Path(out_dir) / 'manifest.json'
        manifest.add_output(path)
        path.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + '\n', encoding='utf-8')
        logger.info(f"Wrote manifest {path}")
        return path
