# Copyright 2026 The CHOKE Engine Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Detection of high-certainty hallucinations from logged model outputs."""

import json

from ._choke import (
    ChokeError,
    contains_gold,
    default_skip_tokens,
    edit_distance,
    is_numeric_answer,
    jaccard,
    normalize_text,
    optimal_threshold,
    permutation_test,
    porter_stem,
    refine,
    stem_overlap,
    unmitigated_rate,
    welch_t_test,
)
from . import _choke

__all__ = [
    "ChokeError",
    "contains_gold",
    "default_skip_tokens",
    "edit_distance",
    "is_numeric_answer",
    "jaccard",
    "knows",
    "label",
    "normalize_text",
    "optimal_threshold",
    "permutation_test",
    "porter_stem",
    "read_jsonl",
    "refine",
    "run",
    "score_record",
    "stem_overlap",
    "unmitigated_rate",
    "validate_record",
    "welch_t_test",
]


def _as_json(record):
    return record if isinstance(record, str) else json.dumps(record)


def read_jsonl(path):
    """Yield one record dict per non-empty line of a JSONL corpus."""
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                yield json.loads(line)


def validate_record(record):
    """List of (field_path, message) invariant violations for one record."""
    return _choke.validate_record(_as_json(record))


def knows(record):
    return _choke.knows(_as_json(record))


def label(record, star_formatting=False):
    """{"outcome": ..., "reason": ...} for one record."""
    return _choke.label(_as_json(record), star_formatting)


def score_record(record, metrics=()):
    return _choke.score_record(_as_json(record), list(metrics))


def run(command, inputs=(), out_dir=".", config=None, shared_only=False):
    """Run one pipeline stage and return its exit status."""
    return _choke.run(command, list(map(str, inputs)), str(out_dir),
                      json.dumps(config or {}), shared_only)
