import logging
from pathlib import Path

import numpy as np
import pandas as pd

from common.management.base import TransportCommand
from estimator.domain import LossKind
from estimator.serializers import LossSpecSerializer
from exact_ot.solver import solve_exact
from measures.io import FLOAT_FORMAT, read_target_csv
from ot_core.domain import SinkhornConfig
from ot_core.sinkhorn import sinkhorn, sinkhorn_divergence, transport_plan

logger = logging.getLogger(__name__)


class Command(TransportCommand):
    help = 'Compute W0, W_lambda or S_lambda between two point clouds (uniform weights)'

    def add_arguments(self, parser):
        parser.add_argument('source_csv', type=str, help='Point cloud CSV (x1..xd, optional label column)')
        parser.add_argument('target_csv', type=str, help='Point cloud CSV (x1..xd, optional label column)')
        parser.add_argument('--loss', type=str, default=LossKind.W0.value,
                            help='W0, Wlambda or Slambda (default: W0)')
        parser.add_argument('--lambda', dest='lam', type=float, default=None,
                            help='Regularization parameter (required for Wlambda / Slambda)')
        parser.add_argument('--iters', type=str, default=None,
                            help="Sinkhorn iterations, or 'none' to iterate until convergence (default)")
        parser.add_argument('--tol', type=float, default=None, help='Sinkhorn marginal tolerance')
        parser.add_argument('--dual-out', type=str, default=None, help='Write dual potentials to this CSV')
        parser.add_argument('--plan-out', type=str, default=None, help='Write the transport plan to this CSV')
        self.add_quiet_argument(parser)

    def run(self, *args, **options):
        serializer = LossSpecSerializer(data={
            key: options[key] for key in ('loss', 'lam', 'iters', 'tol') if options[key] is not None
        })
        serializer.is_valid(raise_exception=True)
        spec = serializer.build()
        tolerance = serializer.validated_data.get('tol')

        a = read_target_csv(options['source_csv'])
        b = read_target_csv(options['target_csv'])

        if spec.kind is LossKind.W0:
            result = solve_exact(a, b)
            cost, plan = result.cost, result.plan
            duals = {'phi': result.dual_phi, 'psi': result.dual_psi}
        else:
            cfg = SinkhornConfig(lam=spec.lam, max_iterations=spec.iteration_budget, tolerance=tolerance)
            if spec.kind is LossKind.WLAMBDA:
                solution = sinkhorn(a, b, cfg)
                cost = solution.cost
            else:
                divergence = sinkhorn_divergence(a, b, cfg)
                solution = divergence.cross
                cost = divergence.value
            plan = transport_plan(solution, a, b)
            duals = {'phi': solution.phi, 'psi': solution.psi}
            if spec.kind is LossKind.SLAMBDA:
                duals['source_symmetric'] = divergence.source_symmetric.phi
                duals['target_symmetric'] = divergence.target_symmetric.phi

        logger.info(f"Solved: loss={spec.label} I={a.n} J={b.n} cost={cost:.17g}")
        if options['dual_out']:
            self._write_duals(duals, options['dual_out'])
        if options['plan_out']:
            self._write_plan(plan, options['plan_out'])

        self.stdout.write(f"{cost:.12g}")

    def _write_duals(self, duals, path):
        """potential, index, value 의 긴 형식"""
        rows = [
            {'potential': name, 'index': index, 'value': value}
            for name, values in duals.items()
            for index, value in enumerate(np.asarray(values))
        ]
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(rows, columns=['potential', 'index', 'value']).to_csv(path, index=False,
                                                                          float_format=FLOAT_FORMAT)
        logger.info(f"Wrote dual potentials: path={path}")

    def _write_plan(self, plan, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(plan, columns=[f'y{j}' for j in range(1, plan.shape[1] + 1)])
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Wrote transport plan: path={path} shape={plan.shape}")
