# Copyright 2026 The modelshare Authors
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


"""Federated estimation errors, optimal weights and coalition stability."""

from ._core import (
    CapExceeded,
    GameConfig,
    ValidationError,
    blocking_profile,
    check_stability,
    construct_individually_stable,
    construct_strict_core_coarse,
    empirical_error,
    error,
    optimal_v,
    optimal_w,
    player_errors,
    reproduce,
    run_cli,
    stable_partitions,
)

__all__ = [
    "CapExceeded",
    "GameConfig",
    "ValidationError",
    "blocking_profile",
    "check_stability",
    "construct_individually_stable",
    "construct_strict_core_coarse",
    "empirical_error",
    "error",
    "optimal_v",
    "optimal_w",
    "player_errors",
    "reproduce",
    "run_cli",
    "stable_partitions",
]
