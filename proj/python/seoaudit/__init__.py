"""Python access to the seoaudit detectors, features and resilience metrics."""

import json
import os

from ._seoaudit import SeoauditError
from . import _seoaudit as _core

__all__ = [
    "SeoauditError",
    "bench",
    "classifier_metrics",
    "cumulative_resilience",
    "detect_cloaking",
    "detect_link_farm",
    "extract_features",
    "relative_difference",
    "rewrite_distance",
]

relative_difference = _core.relative_difference
cumulative_resilience = _core.cumulative_resilience
classifier_metrics = _core.classifier_metrics


def extract_features(html, url="http://localhost/"):
    return json.loads(_core.features_json(html, url))


def detect_cloaking(crawler_html, user_html, summary, url="http://localhost/"):
    return json.loads(_core.cloaking_json(crawler_html, user_html, summary, url))


def detect_link_farm(visit_a, visit_b, wildcard=False):
    return json.loads(_core.link_farm_json(sorted(set(visit_a)), sorted(set(visit_b)), wildcard))


def rewrite_distance(original, rewritten):
    """Returns (std, ed) for a query and its rewrite."""
    return _core.rewrite_distance(original, rewritten)


def bench(dataset, corpus, scorer=None, config=None, trials=3, jobs=1, format="json"):
    """Runs the resilience bench and returns the rendered report text."""
    text = _core.bench(os.fspath(dataset), os.fspath(corpus), os.fspath(scorer or ""),
                       os.fspath(config or ""), trials, jobs, format)
    return json.loads(text) if format == "json" else text
