#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ck {

// Error taxonomy mirrors the process exit codes: validation -> 2,
// inadmissible data -> 3, convergence failure -> 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::atomic<int>& thread_count_slot()
{
    static std::atomic<int> n{1};
    return n;
}
inline void set_thread_count(int n) { thread_count_slot() = n < 1 ? 1 : n; }
inline int thread_count() { return thread_count_slot().load(); }

// Static-chunk parallel map. Each index writes its own slot, so results are
// identical for any worker count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    const int nt = thread_count();
    if (nt <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(nt, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

} // namespace ck
