#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace msde {

// FNV-1a 64-bit, used for config/model fingerprints in artifact names.
inline std::uint64_t fnv1a64(std::span<const char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string fingerprint_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64({s.data(), s.size()})));
    return std::string(buf);
}

// Deterministic double formatting for CSV artifacts (round-trips exactly).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// Runs f(lo, hi, block_index) over fixed-size blocks of [0, n).
// The block partition depends only on n, never on the thread count, so
// per-block partial results can be reduced in block order and the final
// answer is identical for any --threads value.
template <class Fn>
void parallel_blocks(std::size_t n, int threads, Fn&& f, std::size_t block_size = 256) {
    if (n == 0) return;
    const std::size_t n_blocks = (n + block_size - 1) / block_size;
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t n_threads = threads > 0 ? static_cast<std::size_t>(threads)
                                        : (hw > 0 ? hw : 1);
    if (n_threads > n_blocks) n_threads = n_blocks;

    if (n_threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            f(b * block_size, std::min(n, (b + 1) * block_size), b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= n_blocks || failed.load()) return;
            try {
                f(b * block_size, std::min(n, (b + 1) * block_size), b);
            } catch (...) {
                std::scoped_lock lk(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

// Sequential mean/SE over a path-ordered array; reduction order is fixed
// so results do not depend on how the values were produced in parallel.
inline MeanSe mean_se(std::span<const double> xs) {
    MeanSe r;
    r.n = xs.size();
    if (r.n == 0) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(r.n);
    if (r.n < 2) return r;
    double ss = 0.0;
    for (double x : xs) {
        double d = x - r.mean;
        ss += d * d;
    }
    r.se = std::sqrt(ss / (static_cast<double>(r.n) * static_cast<double>(r.n - 1)));
    return r;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    LinearFit fit;
    fit.n = x.size();
    if (x.size() != y.size() || x.size() < 2) return fit;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size(); my /= y.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx; sxy += dx * dy; syy += dy * dy;
    }
    if (sxx <= 0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

inline double sqr(double x) { return x * x; }

} // namespace msde
