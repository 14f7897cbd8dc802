from uniest.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Compares the Monte Carlo f1 operator with its closed form and checks its top eigenpair."
    experiment = "f1-check"
