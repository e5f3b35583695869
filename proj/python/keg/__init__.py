"""Kidney exchange game: matchings, equilibria, sampling and instance generation."""

import json

from . import _keg

__all__ = [
    "max_matching",
    "count_matchings",
    "sample",
    "k_best",
    "verify",
    "swe",
    "generate",
    "experiment_row",
]


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def _pairs(matching):
    return [tuple(e) for e in matching]


def max_matching(instance):
    return _pairs(json.loads(_keg.max_matching(_text(instance))))


def count_matchings(instance, k, cap=32):
    return int(_keg.count_matchings(_text(instance), k, cap))


def sample(instance, n, seed, cap=32):
    return [_pairs(m) for m in json.loads(_keg.sample(_text(instance), n, seed, cap))]


def k_best(instance, k):
    return json.loads(_keg.k_best(_text(instance), k))


def verify(instance, matching, strict=""):
    return json.loads(_keg.verify(_text(instance), json.dumps([list(e) for e in matching]), strict))


def swe(instance, ia="card"):
    return _pairs(json.loads(_keg.swe(_text(instance), ia)))


def generate(dist, n, year, seed, players=()):
    return json.loads(_keg.generate(_text(dist), n, year, seed, list(players)))


def experiment_row(instance, mode="card", budget=1000, seed=7):
    return json.loads(_keg.experiment_row(_text(instance), mode, budget, seed))
