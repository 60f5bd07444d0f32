// Copyright 2026 The nsgp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace nsgp {

/// The tunables of the approximation. n_t == 0 selects the single-node
/// squared-exponential scheme (t_min == t_max == 0).
struct ApproxParams {
  double t_min = 0.0;
  double t_max = 0.0;
  int n_t = 0;
  int n_sigma = 1;
  int m = 1;
  double delta_omega = 0.125;
  double nufft_tol = 1e-7;
};

}  // namespace nsgp
