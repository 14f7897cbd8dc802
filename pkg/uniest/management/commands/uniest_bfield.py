from uniest.management.base import ExperimentCommand, as_flag, as_vector


class Command(ExperimentCommand):
    help = (
        "Estimates a constant magnetic field from one pass of a spin-1/2 particle. Without --axis "
        "and --angle a Haar-random field is drawn for every trial."
    )
    experiment = "bfield"
    option_defaults = {"axis": None, "angle": None, "per_trial": False}
    option_types = {"axis": as_vector, "angle": float, "per_trial": as_flag}

    def add_experiment_arguments(self, parser):
        parser.add_argument("--axis", help="Field direction as x,y,z.")
        parser.add_argument("--angle", type=float, help="Rotation angle in [0, pi].")
        parser.add_argument(
            "--per-trial",
            action="store_true",
            default=None,
            help="Include the per-trial table (true and guessed fields, errors).",
        )
