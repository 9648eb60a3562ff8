#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace slnz {

// Matrix entries are arbitrary-precision: word-ball elements of SL_n(Z)
// grow without bound, so fixed-width integers are not an option.
using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

/// Thrown when an enumeration would exceed its configured element cap.
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline long long to_ll(const BigInt& x) {
    static const BigInt bound = BigInt(1) << 62;
    if (x > bound || x < -bound)
        throw std::overflow_error("to_ll: value does not fit in 64 bits");
    return static_cast<long long>(x);
}

/// Runs fn(i) for i in [0, count) across `threads` workers.
/// Work is split by index blocks, so any output indexed by i is deterministic.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (threads <= 1 || count < 2 * threads) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// Process-wide worker override; 0 means "use the hardware count".
inline unsigned& configured_threads() {
    static unsigned t = 0;
    return t;
}

inline unsigned default_threads() {
    if (configured_threads() != 0) return configured_threads();
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

}  // namespace slnz
