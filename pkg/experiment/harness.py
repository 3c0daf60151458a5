"""
Monte Carlo harness: repetitions x lambda grid x loss x iteration budget.

Repetition r of every cell consumes the dataset drawn with seed base_seed + r,
so cells are compared on paired data. Units of work (cell, r) run on a thread
pool or as Celery tasks; the report is assembled in a fixed order.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from common.exceptions import OptimalTransportError
from datagen.domain import Dataset
from datagen.generator import dataset_hash, draw, subsample
from estimator.descent import estimate
from estimator.domain import DescentConfig, LossKind
from experiment.domain import CellKey, CellRecord, ExperimentReport
from measures.domain import DiscreteMeasure, LabeledSample, SimplexVector
from measures.services import from_labeled
from ot_core.bounds import iteration_schedule, regularization_schedule

logger = logging.getLogger(__name__)


class SimulatedData:
    """가우시안 혼합 시뮬레이션 (반복마다 새 표본)"""

    def __init__(self, spec, budget):
        self.spec = spec
        self.budget = budget

    def dataset(self, seed):
        return draw(self.spec, self.budget, seed)

    def target_size(self):
        return self.budget.n

    @property
    def dimension(self):
        return self.spec.d


class IngestedData:
    """
    CSV 로 읽은 실측 데이터

    per_class_source / n_target 이 주어지면 반복마다 부분 추출, 아니면 전체 데이터를 그대로 사용
    """

    def __init__(self, source, target, per_class_source=None, n_target=None):
        self.source = source
        self.target = target
        self.per_class_source = per_class_source
        self.n_target = n_target

    def dataset(self, seed):
        if self.per_class_source is None and self.n_target is None:
            counts = np.bincount(self.target.labels, minlength=self.source.n_classes + 1)[1:]
            return Dataset(
                source=self.source,
                target=DiscreteMeasure.uniform(self.target.points),
                target_labels=self.target.labels,
                theta_star=SimplexVector.from_counts(counts[:self.source.n_classes]),
            )
        return subsample(
            self.source,
            self.target,
            per_class_source=self.per_class_source or int(self.source.class_counts().max()),
            n_target=self.n_target or self.target.m,
            seed=seed,
        )

    def target_size(self):
        return self.n_target or self.target.m

    @property
    def dimension(self):
        return self.source.d


def sweep_cells(cfg, target_size=None, dimension=None):
    """
    W0 셀 한 번, 이후 (Wlambda, Slambda) x lambda x l

    lambda_schedule 이 설정되면 grid 대신 손실별 lambda_n 하나를,
    iteration_schedule 이 설정되면 iteration_budgets 대신 손실별 l_n 하나를 사용합니다.
    """
    cells = []
    if LossKind.W0.value in cfg.losses:
        cells.append(CellKey(LossKind.W0.value))
    for loss in (LossKind.WLAMBDA.value, LossKind.SLAMBDA.value):
        if loss not in cfg.losses:
            continue
        if cfg.lambda_schedule is not None:
            grid = (regularization_schedule(target_size, dimension, loss, cfg.lambda_schedule),)
        else:
            grid = cfg.lambda_grid
        if cfg.iteration_schedule is not None:
            budgets = (iteration_schedule(target_size, dimension, loss, cfg.schedule_radius, cfg.iteration_schedule),)
        else:
            budgets = cfg.iteration_budgets
        for lam in grid:
            for ell in budgets:
                cells.append(CellKey(loss, lam, ell))
    return cells


def run_unit(dataset, theta_star, cell, rep, descent, fingerprint):
    """
    한 셀의 한 반복: estimate 호출만 시간 측정

    OptimalTransportError 및 예기치 않은 오류는 실패 기록으로 남기고 sweep 은 계속됩니다.
    """
    model = from_labeled(dataset.source)
    start = time.perf_counter()
    try:
        result = estimate(model, dataset.target, cell.loss_spec(), descent)
    except OptimalTransportError as e:
        logger.warning(f"Cell failed: cell={cell.label} rep={rep} error={e}")
        return _failure(cell, rep, fingerprint, time.perf_counter() - start, str(e))
    except Exception as e:
        logger.error(f"Unexpected error in cell: cell={cell.label} rep={rep} error={e}", exc_info=True)
        return _failure(cell, rep, fingerprint, time.perf_counter() - start, f"{type(e).__name__}: {e}")
    seconds = time.perf_counter() - start

    error = result.theta_hat.distance_squared(theta_star)
    logger.info(f"Cell finished: cell={cell.label} rep={rep} error={error:.6g} seconds={seconds:.3f} "
                f"sinkhorn_iterations={result.total_sinkhorn_iterations}")
    return CellRecord(
        cell=cell,
        rep=rep,
        error=error,
        seconds=seconds,
        sinkhorn_iters=result.total_sinkhorn_iterations,
        converged=result.converged,
        dataset_hash=fingerprint,
        theta_hat=tuple(result.theta_hat.tolist()),
    )


def _failure(cell, rep, fingerprint, seconds, message):
    return CellRecord(
        cell=cell,
        rep=rep,
        error=float('nan'),
        seconds=seconds,
        sinkhorn_iters=0,
        converged=False,
        dataset_hash=fingerprint,
        failure=message,
    )


def unit_payload(dataset, theta_star, cell, rep, descent, fingerprint):
    """Celery 작업 인자 (JSON 직렬화 가능)"""
    return {
        'source_points': dataset.source.points.tolist(),
        'source_labels': dataset.source.labels.tolist(),
        'n_classes': dataset.source.n_classes,
        'target_points': dataset.target.points.tolist(),
        'theta_star': theta_star.tolist(),
        'cell': {'loss': cell.loss, 'lam': cell.lam, 'ell': cell.ell},
        'rep': rep,
        'descent': {
            'step_size': descent.step_size,
            'max_outer_iterations': descent.max_outer_iterations,
            'theta_tolerance': descent.theta_tolerance,
            'backtracking_factor': descent.backtracking_factor,
            'max_halvings': descent.max_halvings,
            'seed_theta': descent.seed_theta if descent.uniform_seed else descent.seed_theta.tolist(),
            'warm_start': descent.warm_start,
            'sinkhorn_tolerance': descent.sinkhorn_tolerance,
        },
        'dataset_hash': fingerprint,
    }


def run_payload(payload):
    """unit_payload 를 풀어 run_unit 실행 (worker 쪽)"""
    dataset = Dataset(
        source=LabeledSample(payload['source_points'], payload['source_labels'], n_classes=payload['n_classes']),
        target=DiscreteMeasure.uniform(payload['target_points']),
        target_labels=[],
        theta_star=SimplexVector(payload['theta_star']),
    )
    return run_unit(
        dataset,
        dataset.theta_star,
        CellKey(**payload['cell']),
        payload['rep'],
        DescentConfig(**payload['descent']),
        payload['dataset_hash'],
    )


class SweepRunner:
    def __init__(self, provider, cfg):
        self.provider = provider
        self.cfg = cfg

    def _datasets(self):
        datasets = []
        for rep in range(self.cfg.repetitions):
            dataset = self.provider.dataset(self.cfg.seed_for(rep))
            theta_star = self.cfg.theta_star or dataset.theta_star
            datasets.append((dataset, theta_star, dataset_hash(dataset.source, dataset.target)))
        return datasets

    def _execute_threads(self, units):
        if self.cfg.threads == 1:
            return [run_unit(*unit) for unit in units]
        with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
            return list(pool.map(lambda unit: run_unit(*unit), units))

    def _execute_celery(self, units):
        from celery import group

        from experiment.tasks import run_cell_task

        job = group(run_cell_task.s(unit_payload(*unit)) for unit in units)
        payloads = job.apply_async().get(disable_sync_subtasks=False)
        return [CellRecord.from_payload(payload) for payload in payloads]

    def run(self):
        cfg = self.cfg
        cells = sweep_cells(cfg, target_size=self.provider.target_size(), dimension=self.provider.dimension)
        datasets = self._datasets()
        units = [
            (dataset, theta_star, cell, rep, cfg.descent, fingerprint)
            for cell in cells
            for rep, (dataset, theta_star, fingerprint) in enumerate(datasets)
        ]
        logger.info(f"Sweep started: cells={len(cells)} repetitions={cfg.repetitions} "
                    f"units={len(units)} executor={cfg.executor} threads={cfg.threads}")

        start = time.perf_counter()
        if cfg.executor == 'celery':
            records = self._execute_celery(units)
        else:
            records = self._execute_threads(units)

        order = {cell: index for index, cell in enumerate(cells)}
        records = sorted(records, key=lambda record: (order[record.cell], record.rep))
        failures = sum(record.failed for record in records)
        logger.info(f"Sweep finished: units={len(records)} failures={failures} "
                    f"seconds={time.perf_counter() - start:.2f}")

        return ExperimentReport(
            records=tuple(records),
            cells=tuple(cells),
            theta_star=tuple(datasets[0][1].tolist()),
            dataset_hashes=tuple(fingerprint for _, _, fingerprint in datasets),
        )


def run_sweep(provider, cfg):
    """
    Args:
        provider: SimulatedData 또는 IngestedData
        cfg: SweepConfig

    Returns:
        ExperimentReport
    """
    return SweepRunner(provider, cfg).run()
