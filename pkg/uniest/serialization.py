"""
JSON codecs for matrices, irrep decompositions, POVMs and estimates.

Complex matrices are stored as nested lists whose leaves are [re, im] pairs.
"""
import json
import math

import numpy as np

from uniest.errors import UniestInputError
from uniest.probes import IrrepBlock, IrrepDecomposition
from uniest.strategies import DiscretePOVM


def encode_matrix(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    return np.stack([matrix.real, matrix.imag], axis=-1).tolist()


def decode_matrix(data, ndim=2):
    try:
        pairs = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise UniestInputError(f'Cannot read a complex array: {e}') from e
    if pairs.ndim != ndim + 1 or pairs.shape[-1] != 2:
        raise UniestInputError(f'Expected a {ndim}-dimensional array of [re, im] pairs, got shape {pairs.shape}.')
    return pairs[..., 0] + 1j * pairs[..., 1]


def dump_povm(povm):
    return {
        'elements': [encode_matrix(g) for g in povm.elements],
        'guesses': [encode_matrix(u) for u in povm.guesses],
    }


def load_povm(data):
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        elements = data['elements']
        guesses = data['guesses']
    except (KeyError, TypeError) as e:
        raise UniestInputError(f'POVM documents need "elements" and "guesses": {e}') from e
    return DiscretePOVM(
        elements=tuple(decode_matrix(g) for g in elements),
        guesses=tuple(decode_matrix(u) for u in guesses),
    )


def dump_irreps(irreps):
    return {
        'd': irreps.d,
        'copies': irreps.copies,
        'blocks': [
            {
                'label': block.label,
                'multiplicity': block.multiplicity,
                'dim': block.dim,
                'basis': encode_matrix(block.basis),
            }
            for block in irreps.blocks
        ],
    }


def load_irreps(data):
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        blocks = tuple(
            IrrepBlock(b['label'], int(b['multiplicity']), int(b['dim']), decode_matrix(b['basis']))
            for b in data['blocks']
        )
        total = blocks[0].basis.shape[1] if blocks else 0
        copies = int(data.get('copies', 1))
        d = int(data.get('d', round(total ** (1 / copies))))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise UniestInputError(f'Malformed irrep decomposition: {e}') from e
    return IrrepDecomposition(blocks, d=d, copies=copies)


def load_estimate(data):
    from uniest.fidelity import Estimate

    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        return Estimate(
            mean=float(data['mean']),
            stderr=float(data['stderr']),
            samples=int(data['samples']),
            seed=int(data['seed']),
            strategy=data.get('strategy', ''),
            d=data.get('d'),
            copies=data.get('N'),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise UniestInputError(f'Malformed estimate: {e}') from e


def finite_or_none(value):
    """JSON has no NaN or infinity."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value
