# Copyright 2026 The Authors.
#
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
"""Python bindings for the femtocache core."""

import json

from ._femtocache import (
    DEFAULT_FILE_BITS,
    ConnectivityGraph,
    DegenerateInstance,
    InstanceTooLarge,
    InsufficientData,
    InvalidParameter,
    IterationLimit,
    bs_only_delay,
    brute_force_place,
    build_connectivity,
    coded_place,
    d2d_expected_active,
    d2d_simulate,
    evaluate_coded_delay,
    evaluate_delay,
    experiments,
    fit_zipf,
    greedy_place,
    head_mass,
    most_popular_place,
    resolve_config_json,
    run_experiment_json,
    version,
    zipf_pmf,
)

__version__ = version()


def run_experiment(experiment, **fields):
    """Runs `experiment` with config fields given as keywords.

    Returns the primary output (CSV or JSON text) exactly as the CLI would
    write it.
    """
    config = {"experiment": experiment, **fields}
    return run_experiment_json(json.dumps(config))


def resolve_config(experiment, **fields):
    """Fully defaulted and validated config as a dict."""
    config = {"experiment": experiment, **fields}
    return json.loads(resolve_config_json(json.dumps(config)))
