"""
prepare - waveplate state preparation
"""
import logging

from ..services import qstate
from .common import new_manifest, output_dir

logger = logging.getLogger(__name__)

services = None


def set_services(s):
    """Inject services"""
    global services
    services = s


def register(subparsers):
    parser = subparsers.add_parser(
        'prepare',
        help='Print the state prepared from |H> by a HWP and optional QWP',
        description='Apply the waveplates to |H> and print amplitudes and Stokes vector as JSON.',
    )
    parser.add_argument('--hwp', type=float, required=True, help='half-wave plate angle, degrees')
    parser.add_argument('--qwp', action='store_true', help='insert a quarter-wave plate after the HWP')
    parser.add_argument('--qwp-angle', type=float, default=None,
                        help='quarter-wave plate angle, degrees (implies --qwp; default 0)')
    parser.add_argument('--out', default=None, help='also write state.json and manifest.json here')
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    qwp_angle = args.qwp_angle
    if args.qwp and qwp_angle is None:
        qwp_angle = 0.0
    ket = qstate.prepare(args.hwp, qwp_angle)
    document = {
        'hwp': args.hwp,
        'qwp': qwp_angle,
        'ket': ket.to_dict(),
        'stokes': qstate.stokes(qstate.density_of(ket)).to_dict(),
    }
    print(services.export.dumps_json(document))

    out = output_dir(args.out)
    if out is not None:
        manifest = new_manifest(services, 'prepare')
        manifest.add_output(services.export.write_json(document, out / 'state.json'))
        services.export.write_manifest(manifest, out)
    return 0
