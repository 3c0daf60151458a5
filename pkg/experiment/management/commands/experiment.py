import logging

from common.config_file import merge_options, read_key_value_file
from common.management.base import TransportCommand
from experiment.harness import run_sweep
from experiment.reporting import aggregate, write_report
from experiment.serializers import CONFIG_KEYS, SweepConfigSerializer

logger = logging.getLogger(__name__)


class Command(TransportCommand):
    help = 'Run a Monte Carlo sweep over losses, lambda grid and Sinkhorn budgets'

    def add_arguments(self, parser):
        parser.add_argument('--config', type=str, default=None, help='key=value experiment config file')
        parser.add_argument('--output-dir', type=str, default='experiment_output',
                            help='Directory for records.csv and aggregates.json')
        for key in CONFIG_KEYS:
            parser.add_argument(f"--{key.replace('_', '-')}", dest=key, type=str, default=None,
                                help=f'Overrides "{key}" of the config file')
        self.add_quiet_argument(parser)

    def run(self, *args, **options):
        file_values = read_key_value_file(options['config']) if options['config'] else {}
        serializer = SweepConfigSerializer(data=merge_options(file_values, options, CONFIG_KEYS))
        serializer.is_valid(raise_exception=True)
        cfg = serializer.build()
        provider = serializer.build_provider()

        report = run_sweep(provider, cfg)
        paths = write_report(report, options['output_dir'])

        self._print_summary(aggregate(report))
        self.stdout.write(f"\nrecords: {paths['records']}")
        self.stdout.write(f"aggregates: {paths['aggregates']}")

    def _print_summary(self, aggregates):
        self.stdout.write(f"{'Cell':<32} {'Mean error':>14} {'Median':>14} {'Seconds':>10} {'Failures':>9}")
        self.stdout.write('-' * 83)
        for cell in aggregates['cells']:
            label = cell['loss'] if cell['lambda'] is None else f"{cell['loss']} lambda={cell['lambda']:g} l={cell['ell']}"
            mean = '-' if cell['mean_error'] is None else f"{cell['mean_error']:.6g}"
            median = '-' if cell['median_error'] is None else f"{cell['median_error']:.6g}"
            line = f"{label:<32} {mean:>14} {median:>14} {cell['total_seconds']:>10.2f} {cell['failures']:>9}"
            self.stdout.write(self.style.WARNING(line) if cell['failures'] else line)
