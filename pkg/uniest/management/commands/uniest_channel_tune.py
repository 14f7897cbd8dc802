from uniest.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Compares entangled and unentangled tuning of an unknown channel."
    experiment = "channel-tune"
