#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace snls {

/// Configuration file / parameter errors (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Solver failures: non-convergence, missing prerequisites (CLI exit code 3).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A quantitative check that was expected to hold did not (CLI exit code 4).
struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Run fn(i) for i in [0, count). jobs <= 1 runs inline; otherwise a fixed
/// block partition over jobs threads. Results must be written to
/// caller-provided slots indexed by i so reductions stay deterministic.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += nthreads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// FNV-1a over a byte string; used for the config digest.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace snls
