import factory
import factory.fuzzy

from uniest.models import Check, Run

COMMANDS = ['fidelity-n1', 'f1-check', 'fidelity-n2', 'bfield', 'channel-tune', 'povm-validate']


class RunFactory(factory.django.DjangoModelFactory):

    command = factory.fuzzy.FuzzyChoice(COMMANDS)
    d = 2
    samples = 100000
    seed = factory.Sequence(lambda num: num)

    class Meta:
        model = Run


class CheckFactory(factory.django.DjangoModelFactory):
    run = factory.SubFactory(RunFactory)
    name = factory.Sequence(lambda num: 'check_%s' % num)
    value = factory.fuzzy.FuzzyFloat(0, 1)
    reference = 0.5
    tolerance = 0.01
    passed = True

    class Meta:
        model = Check
