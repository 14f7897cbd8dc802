class UniestError(Exception):
    pass


class UniestInputError(UniestError, ValueError):
    pass


class UniestSamplingError(UniestError):
    pass


class UniestNumericalError(UniestError):
    pass


class UniestInternalInconsistency(UniestError):
    pass
