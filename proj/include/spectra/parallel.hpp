#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace spectra {

// Deterministic parallel map: item i -> out[i]; output independent of jobs.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F&& fn, int jobs)
    -> std::vector<decltype(fn(items.front()))> {
    using R = decltype(fn(items.front()));
    std::vector<R> out(items.size());
    if (jobs <= 1 || items.size() <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
        return out;
    }
    std::size_t n = items.size();
    int nw = int(std::min<std::size_t>(std::size_t(jobs), n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs;
    errs.resize(std::size_t(nw));
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = std::size_t(w); i < n; i += std::size_t(nw))
                    out[i] = fn(items[i]);
            } catch (...) {
                errs[std::size_t(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace spectra
