// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>

namespace skorokhod::detail {

/// Calls body(begin, end) on contiguous chunks of [0, n) from up to `threads`
/// threads. The first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace skorokhod::detail
