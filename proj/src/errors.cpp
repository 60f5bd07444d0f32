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

#include "nsgp/errors.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace nsgp {

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler() {
  static WarningHandler h = [](const std::string& msg) {
    std::cerr << "nsgp: warning: " << msg << '\n';
  };
  return h;
}

}  // namespace

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  if (handler()) handler()(message);
}

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  return std::exchange(handler(), std::move(h));
}

}  // namespace nsgp
