# Copyright 2026 The ulearn Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for ulearn.

Classes are lists of equal-length bit strings, one per hypothesis; bit i
of a row is the label of point i. Harness calls take the same JSON specs
as the command-line tool.
"""

import csv
import io
import json

from ._ulearn import (  # noqa: F401
    BudgetError,
    ConfigError,
    ConstructionError,
    Error,
    OnlineLearner,
    RealizabilityError,
    littlestone_dimension,
    littlestone_tree,
    orient_max_out_degree,
    project,
    vc_dimension,
    vcl_dimension,
)
from . import _ulearn


def analyze(spec):
    """Trichotomy verdict record for a class spec (dict or JSON string)."""
    return json.loads(_ulearn.analyze_json(_dump(spec)))


def curve(spec, jobs=1):
    """Learning curve for an experiment spec, as a list of dicts."""
    rows = csv.DictReader(io.StringIO(_ulearn.curve_csv(_dump(spec), jobs)))
    out = []
    for r in rows:
        out.append({k: (int(v) if k in ("n", "seeds") else float(v)) for k, v in r.items()})
    return out


def fit(points, metric="mean"):
    """Exponential and linear fits for a curve from curve()."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "mean_err", "p_nonzero", "stderr", "seeds"])
    for p in points:
        w.writerow([p["n"], repr(p["mean_err"]), repr(p["p_nonzero"]), repr(p["stderr"]), p["seeds"]])
    return json.loads(_ulearn.fit_csv(buf.getvalue(), metric))


def _dump(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)
