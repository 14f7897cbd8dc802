from uniest.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Checks positivity, completeness and guess unitarity of a POVM stored as JSON."
    experiment = "povm-validate"
    option_defaults = {"povm": None}

    def add_experiment_arguments(self, parser):
        parser.add_argument("--povm", help="Path of the POVM document.")
