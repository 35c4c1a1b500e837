#pragma once

#include <cstddef>
#include <span>

namespace mfcbf::detail {

// Fixed-shape pairwise reduction. The tree depends only on the length, so
// results do not change with how callers partition work.
inline double pairwise_sum(std::span<const double> v) noexcept {
    constexpr std::size_t leaf = 8;
    if (v.size() <= leaf) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace mfcbf::detail
