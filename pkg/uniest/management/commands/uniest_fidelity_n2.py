from uniest.experiments import COMPLETENESS_SAMPLES
from uniest.management.base import ExperimentCommand, as_int, as_vector
from uniest.strategies import OPTIMAL_N2_MEASUREMENT, OPTIMAL_N2_PREPARATION


class Command(ExperimentCommand):
    help = (
        "Estimates the two-copy qubit fidelity of the covariant strategy, certifies the completeness "
        "of its measurement and optionally scans the preparation weight or certifies a covariant "
        "measurement built on a custom irrep decomposition."
    )
    experiment = "fidelity-n2"
    option_defaults = {
        "a_prep": OPTIMAL_N2_PREPARATION,
        "a_meas": OPTIMAL_N2_MEASUREMENT,
        "completeness_samples": COMPLETENESS_SAMPLES,
        "irreps": None,
        "weights": None,
    }
    option_types = {
        "a_prep": float,
        "a_meas": float,
        "completeness_samples": as_int,
        "weights": as_vector,
    }

    def add_experiment_arguments(self, parser):
        parser.add_argument("--a-prep", type=float, help="Triplet weight of the prepared probe.")
        parser.add_argument("--a-meas", type=float, help="Triplet weight of the measurement fiducial.")
        parser.add_argument(
            "--grid",
            help="Preparation weights to scan, as a comma list or start:stop:step.",
        )
        parser.add_argument(
            "--completeness-samples",
            type=int,
            help=f"Haar draws behind each completeness certificate (default {COMPLETENESS_SAMPLES}).",
        )
        parser.add_argument("--irreps", help="Path of an irrep decomposition document to certify as well.")
        parser.add_argument(
            "--weights",
            help="Relative block weights for --irreps as a comma list; defaults to weights proportional to the block dimensions.",
        )
