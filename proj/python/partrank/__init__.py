"""Exact partition-rank and analytic-rank toolkit for determinant expansions.

Forms and decompositions travel as their text formats; reports come back
as dicts.
"""

import json

from . import _core
from ._core import (
    BudgetExceeded,
    InternalError,
    PreconditionError,
    det4_quadratic,
    det_form,
    laplace,
    levi_civita,
    run_cli,
    synthetic_two_term,
    two_row_laplace,
)

__all__ = [
    "BudgetExceeded",
    "InternalError",
    "PreconditionError",
    "bias_det",
    "bias_form",
    "det4_quadratic",
    "det_form",
    "identity",
    "laplace",
    "levi_civita",
    "minor_independence",
    "restrict",
    "run_cli",
    "run_experiment",
    "search_det",
    "separation",
    "synthetic_two_term",
    "two_row_laplace",
    "verify",
]


def identity():
    return json.loads(_core.identity())


def verify(decomposition, target=None):
    return json.loads(_core.verify(decomposition, target))


def bias_det(n, q, method="exact", **kw):
    return json.loads(_core.bias_det(n, q, method, **kw))


def bias_form(form, method="exact", **kw):
    return json.loads(_core.bias_form(form, method, **kw))


def search_det(n, q, r, **kw):
    return json.loads(_core.search_det(n, q, r, **kw))


def restrict(decomposition, target=None, force=False):
    return json.loads(_core.restrict(decomposition, target, force))


def run_experiment(config):
    if not isinstance(config, str):
        config = json.dumps(config)
    return json.loads(_core.run_experiment(config))


def separation(d=4, q=2):
    return json.loads(_core.separation(d, q))


def minor_independence(rows, replace=False):
    return json.loads(_core.minor_independence(rows, replace))
