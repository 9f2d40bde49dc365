"""
calibrate - fit both outcome constant sets on known states
"""
import logging

from ..errors import ConfigError
from ..models import Outcome
from .common import experiment_config, new_manifest, output_dir
from .state_spec import parse_state_spec

logger = logging.getLogger(__name__)

services = None


def set_services(s):
    """Inject services"""
    global services
    services = s


def register(subparsers):
    parser = subparsers.add_parser(
        'calibrate',
        help='Fit calibration constants for outcomes D and A',
        description=(
            'Runs the apparatus on calibration.states (default: HWP steps of 11.25 deg plus R, L) '
            'and writes {"schema_version", "constants": [{outcome, a, b, c, d, residual_rms}]}.'
        ),
    )
    parser.add_argument('--config', default=None, help='YAML/JSON config file')
    parser.add_argument('--out', default=None, help='write calibration.json and manifest.json here')
    parser.add_argument('--dry-run', action='store_true', help='validate config, write nothing')
    parser.set_defaults(handler=handle)


def _states(store):
    specs = store.get('calibration.states')
    if specs is None:
        return None
    if isinstance(specs, str) or not isinstance(specs, (list, tuple)):
        raise ConfigError("calibration.states must be a list of state specs")
    return [parse_state_spec(spec) for spec in specs]


def handle(args) -> int:
    cfg = experiment_config(services, stored_constants=False)
    states = _states(services.config)
    if args.dry_run:
        print(f"dry-run ok digest={services.config.digest()}")
        return 0

    constants = services.experiment.calibrate(cfg, states, (Outcome.D, Outcome.A))
    out = output_dir(args.out)
    if out is None:
        document = {'constants': [c.to_dict() for c in constants.values()]}
        print(services.export.dumps_json(document))
        return 0

    manifest = new_manifest(services, 'calibrate')
    manifest.add_output(services.calibration.save_constants(constants.values(), out / 'calibration.json'))
    services.export.write_manifest(manifest, out)
    for c in constants.values():
        print(f"outcome={c.outcome.value} a={c.a:.6g} b={c.b:.6g} c={c.c:.6g} d={c.d:.6g} residual_rms={c.residual_rms:.3e}")
    return 0
