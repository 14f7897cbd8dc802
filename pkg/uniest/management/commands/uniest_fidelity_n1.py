from uniest.experiments import N1_STRATEGIES
from uniest.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Estimates the single-use average fidelity of a strategy and compares it with its closed form."
    experiment = "fidelity-n1"
    option_defaults = {"strategy": "covariant"}

    def add_experiment_arguments(self, parser):
        parser.add_argument(
            "--strategy",
            choices=N1_STRATEGIES,
            help="bell (d = 2 only), covariant or blind. Defaults to covariant.",
        )
