/**
 * Copyright 2026 The ColMix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COLMIX_PARALLEL_HPP_
#define COLMIX_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace colmix {

/// Worker count from COLMIX_WORKERS, falling back to the hardware concurrency.
size_t default_workers();

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Work items must be
/// independent. If any item throws, the exception of the lowest failing index
/// is rethrown after all threads finish.
void parallel_for(size_t n, size_t workers, const std::function<void(size_t)>& fn);

}  // namespace colmix

#endif  // COLMIX_PARALLEL_HPP_
