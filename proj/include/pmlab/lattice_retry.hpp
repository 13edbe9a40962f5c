#pragma once

#include <optional>

namespace pmlab {

template <class R>
R with_precision_retry(u64 p, int d, int N0, int n_max, const std::function<R(const TowerPtr&)>& f, int* used_N) {
    const int cap = max_precision(p);
    std::optional<R> prev;
    for (int N = N0; N <= cap; N += 4) {
        R cur;
        try {
            cur = f(build_tower(build_unramified(p, d, N), n_max));
        } catch (const PrecisionExhausted&) {
            prev.reset();
            continue;
        }
        if (prev && *prev == cur) {
            if (used_N) *used_N = N;
            return cur;
        }
        prev = cur;
    }
    throw PrecisionExhausted("results did not stabilise below the word-size precision cap");
}

}  // namespace pmlab
