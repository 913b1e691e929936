#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace msde::rng {

// Philox4x64-10 counter-based generator (Salmon et al. convention; the
// round function is cross-validated against NumPy's Philox in the tests).
// Counter-based streams are the backbone of the reproducibility contract:
// the stream for (master_seed, stream_id) is a pure function of those two
// integers, so per-path results do not depend on scheduling.
struct Philox4x64 {
    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static void mulhilo(std::uint64_t a, std::uint64_t b,
                        std::uint64_t& hi, std::uint64_t& lo) {
        unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::array<std::uint64_t, 2> key) {
        std::uint64_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
        std::uint64_t k0 = key[0], k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            std::uint64_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, c0, hi0, lo0);
            mulhilo(kMul1, c2, hi1, lo1);
            std::uint64_t n0 = hi1 ^ c1 ^ k0;
            std::uint64_t n1 = lo1;
            std::uint64_t n2 = hi0 ^ c3 ^ k1;
            std::uint64_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }
};

// Mixes (seed, tag) into a fresh master seed for an independent sub-ensemble
// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + tag * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// One substream = one (master_seed, stream_id) pair. Each Philox block
// yields four 64-bit words consumed as uniforms or Box-Muller normal pairs.
class PathStream {
public:
    PathStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : key_{master_seed, stream_id} {}

    // standard normal via Box-Muller on two 64-bit uniforms
    double normal() {
        if (n_normals_ == 0) refill_normals();
        return normals_[--n_normals_];
    }

    void fill_normals(double* out, int n) {
        for (int i = 0; i < n; ++i) out[i] = normal();
    }

    // uniform in [0, 1)
    double uniform01() {
        return to_unit(next_word());
    }

    std::uint64_t next_word() {
        if (word_pos_ == 4) {
            words_ = Philox4x64::block({block_, 0, 0, 0}, key_);
            ++block_;
            word_pos_ = 0;
        }
        return words_[word_pos_++];
    }

    static double to_unit(std::uint64_t w) {
        return static_cast<double>(w >> 11) * 0x1.0p-53;
    }

private:
    void refill_normals() {
        // u1 in (0,1] keeps the log finite
        double u1 = 1.0 - to_unit(next_word());
        double u2 = to_unit(next_word());
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        normals_[0] = r * std::cos(a);
        normals_[1] = r * std::sin(a);
        n_normals_ = 2;
    }

    std::array<std::uint64_t, 2> key_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 4> words_{};
    int word_pos_ = 4;
    double normals_[2]{};
    int n_normals_ = 0;
};

// Name of the normal-generation contract, recorded in ensemble metadata.
inline const char* normal_method_name() { return "box-muller/philox4x64-10"; }

} // namespace msde::rng
