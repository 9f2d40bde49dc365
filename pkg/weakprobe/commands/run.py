"""
run - experiment 1 or 2 on one state
"""
import logging

from ..models import Mode
from ..services import qstate
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
        'run',
        help='Simulate one experiment on a state and reconstruct it',
        description=(
            'exp1 rebuilds the wavefunction from the |D>-post-selected weak value; exp2 measures '
            'the Dirac distribution and inverts it to a density matrix. Writes result.json '
            '(exp2 adds dirac.csv and rho.csv with row,col,re,im) and manifest.json to --out.'
        ),
    )
    parser.add_argument('--mode', choices=[m.value for m in Mode], default=None,
                        help='experiment (default: experiment.mode from the config)')
    parser.add_argument('--state', required=True,
                        help='H|V|D|A|R|L|I, hwp:<deg>[,qwp:<deg>], ket:4 numbers, rho:8 numbers, or a file')
    parser.add_argument('--config', default=None, help='YAML/JSON config file')
    parser.add_argument('--out', default=None, help='output directory')
    parser.add_argument('--dry-run', action='store_true', help='validate config and state, write nothing')
    parser.add_argument('--baseline', action='store_true', help='add the tomography baseline (exp2)')
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    state = parse_state_spec(args.state)
    cfg = experiment_config(services, args.mode)
    if args.dry_run:
        logger.info(f"Dry run: config and state valid (mode {cfg.mode.value})")
        print(f"dry-run ok mode={cfg.mode.value} digest={services.config.digest()}")
        return 0

    truth = qstate.as_density(state)
    if cfg.mode is Mode.EXP1:
        result = services.experiment.run_exp1(state, cfg)
        estimate = qstate.density_of(result.ket.ket)
        summary = (
            f"mode=exp1 w_re={result.weak_value.real:.6g} w_im={result.weak_value.imag:.6g} "
            f"fidelity={result.fidelity_to_truth:.8f} "
            f"trace_distance={qstate.trace_distance(estimate, truth):.3e}"
        )
    else:
        result = services.experiment.run_exp2(state, cfg, baseline=args.baseline)
        summary = (
            f"mode=exp2 p_D={result.p_D:.6f} fidelity={result.metrics.fidelity:.8f} "
            f"trace_distance={result.metrics.trace_distance:.3e} "
            f"hermiticity_deviation={result.metrics.hermiticity_deviation:.3e}"
        )
        if result.baseline is not None:
            summary += (
                f" baseline_fidelity={result.baseline.metrics.fidelity:.8f}"
                f" baseline_trace_distance={result.baseline.metrics.trace_distance:.3e}"
            )
    logger.info(f"Run finished: {summary}")
    print(summary)

    out = output_dir(args.out)
    if out is not None:
        manifest = new_manifest(services, f"run --mode {cfg.mode.value} --state {args.state}")
        document = {'state': args.state, **result.to_dict()}
        manifest.add_output(services.export.write_json(document, out / 'result.json'))
        if cfg.mode is Mode.EXP2:
            manifest.add_output(services.export.write_dirac_csv(result.dirac, out / 'dirac.csv'))
            manifest.add_output(services.export.write_matrix_csv(result.rho.m, out / 'rho.csv'))
        services.export.write_manifest(manifest, out)
    return 0
