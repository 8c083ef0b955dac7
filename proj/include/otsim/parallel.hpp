// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <cstddef>
#include <functional>

namespace otsim {

// Runs body(i) for i in [0, n) on up to `jobs` threads. The first exception
// (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace otsim
