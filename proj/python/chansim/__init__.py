"""Decompose quantum channels into mixtures of generalized-extreme channels.

Matrices are numpy complex arrays. Decompositions, reports, circuits and
bundles are plain dicts in the same JSON layout the command-line tool uses.
"""

import json

import numpy as np

from . import _chansim
from ._chansim import (
    FormatError,
    IoError,
    channel_parameter_count,
    choi,
    kappa,
    parameter_count,
    random_channel,
    trace_distance,
)

__version__ = _chansim.__version__


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def _dim(choi_matrix):
    return int(round(np.sqrt(np.asarray(choi_matrix).shape[0])))


def random_extreme_params(d, seed=0):
    return json.loads(_chansim.random_extreme_params(d, seed))


def extreme_choi(params):
    return _chansim.extreme_choi(_text(params))


def extreme_kraus(params):
    return _chansim.extreme_kraus(_text(params))


def dilation_unitary(params):
    return _chansim.dilation_unitary(_text(params))


def decompose(choi_matrix, epsilon=0.1, seed=0, restarts=0, iters=0, terms=0, solver="adam",
              learning_rate=0.02, early_stop=False, threads=0):
    """Fit a mixture to a Choi matrix; restarts/iters of 0 keep the per-dimension defaults."""
    return json.loads(_chansim.decompose(np.asarray(choi_matrix, dtype=complex), _dim(choi_matrix), epsilon, seed,
                                         restarts, iters, terms, solver, learning_rate, early_stop, threads))


def mixture_choi(decomposition):
    return _chansim.mixture_choi(_text(decomposition))


def verify(choi_matrix, decomposition, epsilon=0.1):
    return json.loads(_chansim.verify(np.asarray(choi_matrix, dtype=complex), _dim(choi_matrix),
                                      _text(decomposition), epsilon))


def certify(choi_matrix, tol=1e-7):
    return json.loads(_chansim.certify(np.asarray(choi_matrix, dtype=complex), _dim(choi_matrix), tol))


def synthesize(decomposition, epsilon=0.1):
    return json.loads(_chansim.synthesize(_text(decomposition), epsilon))


def circuit_unitary(circuit):
    return _chansim.circuit_unitary(_text(circuit))


def sample(decomposition, rho, shots, seed=0):
    return json.loads(_chansim.sample(_text(decomposition), np.asarray(rho, dtype=complex), shots, seed))
