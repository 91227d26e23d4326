// Copyright (c) the hvpf authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HVPF_PARALLEL_HPP_
#define HVPF_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace hvpf {

// Thread cap from HVPF_THREADS (0 or unset = hardware concurrency).
int thread_count();

// Runs fn(i) for i in [0, n). Work items must be independent; results
// keyed by index stay deterministic regardless of the thread count.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace hvpf

#endif  // HVPF_PARALLEL_HPP_
