#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hprec {

/// Evaluates fn(0..count-1) on up to `threads` workers and returns the
/// results in index order, so reductions over them do not depend on the
/// thread count. threads <= 1 runs inline.
std::vector<double> parallel_map(std::size_t count, int threads, const std::function<double(std::size_t)>& fn);

}  // namespace hprec
