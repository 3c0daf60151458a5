import logging

from common.config_file import read_key_value_file
from common.management.base import TransportCommand
from datagen.generator import dataset_hash, default_reference_spec, draw, write_dataset
from datagen.serializers import MixtureSpecSerializer

logger = logging.getLogger(__name__)


class Command(TransportCommand):
    help = 'Simulate a labeled source / unlabeled target Gaussian mixture dataset'

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
        parser.add_argument('--spec-file', type=str, default=None,
                            help='key=value mixture spec (default: K=5, d=6 reference setup)')
        parser.add_argument('--output-dir', type=str, default='.', help='Directory for the CSV files')
        self.add_quiet_argument(parser)

    def run(self, *args, **options):
        seed = options['seed']
        if options['spec_file']:
            serializer = MixtureSpecSerializer(data=read_key_value_file(options['spec_file']))
            serializer.is_valid(raise_exception=True)
            spec, budget = serializer.build(seed)
        else:
            spec, budget = default_reference_spec(seed)

        dataset = draw(spec, budget, seed)
        paths = write_dataset(dataset, options['output_dir'])

        self.stdout.write(self.style.SUCCESS(
            f"Simulated dataset: K={spec.K} d={spec.d} m={dataset.source.m} n={dataset.target.n} "
            f"hash={dataset_hash(dataset.source, dataset.target)}"
        ))
        for name, path in paths.items():
            self.stdout.write(f"  {name}: {path}")
        self.stdout.write(f"  theta*: {', '.join(repr(value) for value in dataset.theta_star.tolist())}")
