import json
import logging
from pathlib import Path

import pandas as pd

from common.config_file import merge_options, read_key_value_file
from common.management.base import TransportCommand
from estimator.descent import estimate
from estimator.serializers import DescentConfigSerializer, LossSpecSerializer
from measures.io import FLOAT_FORMAT, read_source_csv, read_target_csv
from measures.services import from_labeled

logger = logging.getLogger(__name__)

LOSS_KEYS = ('loss', 'lam', 'iters', 'tol')
DESCENT_KEYS = ('step_size', 'max_outer_iterations', 'theta_tolerance', 'backtracking_factor', 'max_halvings',
                'seed_theta', 'warm_start')


class Command(TransportCommand):
    help = 'Estimate target class proportions by projected gradient descent on the chosen loss'

    def add_arguments(self, parser):
        parser.add_argument('source_csv', type=str, help='Labeled source CSV (x1..xd,label)')
        parser.add_argument('target_csv', type=str, help='Unlabeled target CSV (x1..xd)')
        parser.add_argument('--config', type=str, default=None, help='key=value file; flags override it')
        parser.add_argument('--loss', type=str, default=None, help='W0, Wlambda or Slambda (default: W0)')
        parser.add_argument('--lambda', dest='lam', type=str, default=None, help='Regularization parameter')
        parser.add_argument('--iters', type=str, default=None,
                            help="Sinkhorn iterations per loss evaluation, or 'none' (default)")
        parser.add_argument('--tol', type=str, default=None, help='Sinkhorn marginal tolerance')
        parser.add_argument('--step-size', type=str, default=None, help='Initial step size of each outer step')
        parser.add_argument('--max-outer-iterations', type=str, default=None)
        parser.add_argument('--theta-tolerance', type=str, default=None,
                            help='Stop when the accepted step moves theta less than this')
        parser.add_argument('--backtracking-factor', type=str, default=None)
        parser.add_argument('--max-halvings', type=str, default=None)
        parser.add_argument('--seed-theta', type=str, default=None,
                            help="Initial theta as comma separated values (default: uniform)")
        parser.add_argument('--no-warm-start', dest='warm_start', action='store_const', const='no', default=None,
                            help='Start every Sinkhorn run from zero potentials')
        parser.add_argument('--theta-out', type=str, default='theta.json', help='Output JSON (default: theta.json)')
        parser.add_argument('--trace-out', type=str, default='trace.csv', help='Output CSV (default: trace.csv)')
        self.add_quiet_argument(parser)

    def run(self, *args, **options):
        file_values = read_key_value_file(options['config']) if options['config'] else {}
        merged = merge_options(file_values, options, LOSS_KEYS + DESCENT_KEYS)
        merged.setdefault('loss', 'W0')

        loss_serializer = LossSpecSerializer(data={key: merged[key] for key in LOSS_KEYS if key in merged})
        loss_serializer.is_valid(raise_exception=True)
        descent_data = {key: merged[key] for key in DESCENT_KEYS if key in merged}
        if 'tol' in merged:
            descent_data['tolerance'] = merged['tol']
        descent_serializer = DescentConfigSerializer(data=descent_data)
        descent_serializer.is_valid(raise_exception=True)
        spec = loss_serializer.build()
        cfg = descent_serializer.build()

        sample = read_source_csv(options['source_csv'])
        target, labels = read_target_csv(options['target_csv'], with_labels=True)
        if labels is not None:
            logger.info(f"Ignoring target label column: path={options['target_csv']}")

        model = from_labeled(sample)
        result = estimate(model, target, spec, cfg)

        self._write_theta(result, spec, options['theta_out'])
        self._write_trace(result, options['trace_out'])

        for class_id, value in enumerate(result.theta_hat.tolist(), 1):
            self.stdout.write(f"{class_id}\t{value!r}")
        style = self.style.SUCCESS if result.converged else self.style.WARNING
        self.stdout.write(style(
            f"loss={spec.label} converged={result.converged} outer_iterations={result.outer_iterations} "
            f"sinkhorn_iterations={result.total_sinkhorn_iterations}"
        ))

    def _write_theta(self, result, spec, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            'loss': spec.kind.value,
            'lambda': spec.lam,
            'iters': spec.iteration_budget,
            'classes': list(range(1, result.theta_hat.K + 1)),
            **result.as_dict(),
        }
        path.write_text(json.dumps(payload, indent=2), encoding='utf-8')
        logger.info(f"Wrote theta: path={path}")

    def _write_trace(self, result, path):
        frame = pd.DataFrame({
            'iteration': range(len(result.loss_trace)),
            'loss': result.loss_trace,
            'gradient_norm': result.gradient_norm_trace,
        })
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Wrote descent trace: path={path} rows={len(frame)}")
