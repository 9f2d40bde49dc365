"""
sweep - HWP sweeps along the three Poincare-sphere paths
"""
import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from ..models import Mode, SweepRow
from .common import experiment_config, new_manifest, output_dir

logger = logging.getLogger(__name__)

# QWP angle placed after the HWP for each path
PATHS = {
    'blue': None,
    'red': 0.0,
    'green': 45.0,
}

services = None


def set_services(s):
    """Inject services"""
    global services
    services = s


def _points(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: '{value}'") from None
    if n < 2:
        raise argparse.ArgumentTypeError(f"a sweep needs at least 2 points, got {n}")
    return n


def register(subparsers):
    parser = subparsers.add_parser(
        'sweep',
        help='Experiment-1 sweep of the HWP over [0, 90) deg',
        description=(
            'Paths: blue = HWP only (H-D-V-A circle), red = HWP then QWP at 0 deg (H-R-V-L), '
            'green = HWP then QWP at 45 deg (D-L-A-R). One CSV row per point.'
        ),
        epilog=(
            'CSV columns: ' + ', '.join(SweepRow.HEADER) + '. '
            'w_* are the true and measured weak values of pi_H post-selected on |D>; alpha/beta '
            'are H/V amplitudes in the gauge where <D|psi> is real and positive; s* are Stokes '
            'parameters; divergent rows (|D> post-selection impossible) carry empty measured '
            'fields; near_orthogonal marks states within 10 deg of |A>.'
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--path', choices=sorted(PATHS), required=True, help='waveplate path')
    parser.add_argument('--points', type=_points, default=36, help='number of HWP angles (>= 2)')
    parser.add_argument('--config', default=None, help='YAML/JSON config file')
    parser.add_argument('--out', default=None, help='write sweep_<path>.csv and manifest.json here')
    parser.add_argument('--xlsx', default=None, help='also write the table as a workbook')
    parser.add_argument('--dry-run', action='store_true', help='validate config, write nothing')
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    # sweeps always post-select on D only
    cfg = experiment_config(services, Mode.EXP1.value)
    if args.dry_run:
        print(f"dry-run ok path={args.path} points={args.points} digest={services.config.digest()}")
        return 0

    angles = np.linspace(0.0, 90.0, args.points, endpoint=False).tolist()
    rows = services.experiment.sweep_hwp(angles, PATHS[args.path], cfg)

    out = output_dir(args.out)
    manifest = new_manifest(services, f"sweep --path {args.path} --points {args.points}")
    if out is None:
        sys.stdout.write(services.export.sweep_csv_text(rows))
    else:
        manifest.add_output(services.export.write_sweep_csv(rows, out / f"sweep_{args.path}.csv"))
    if args.xlsx:
        workbook = Path(args.xlsx)
        output_dir(str(workbook.parent))
        manifest.add_output(services.export.write_sweep_workbook(rows, workbook))
        out = out or workbook.parent
    if out is not None:
        services.export.write_manifest(manifest, out)
    return 0
