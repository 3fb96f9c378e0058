#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fdlab::mc {

/// Philox4x64-10 counter-based block cipher (Salmon et al. constants).
/// One block maps a (counter, key) pair to 4 independent 64-bit words; streams
/// never share (counter, key) pairs, so partitioning work across threads
/// cannot change the draws.
struct Philox4x64 {
    static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::array<std::uint64_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            unsigned __int128 p0 = (unsigned __int128)kM0 * ctr[0];
            unsigned __int128 p1 = (unsigned __int128)kM1 * ctr[2];
            std::uint64_t lo0 = (std::uint64_t)p0, hi0 = (std::uint64_t)(p0 >> 64);
            std::uint64_t lo1 = (std::uint64_t)p1, hi1 = (std::uint64_t)(p1 >> 64);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Deterministic stream of doubles for one particle: counter is
/// (particle, step, block, 0), key is the 64-bit seed split over both words.
/// set_step() resets the draw position, so the draw sequence of a step never
/// depends on what earlier steps consumed.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t particle)
        : key_{seed, 0x5851F42D4C957F2DULL ^ seed}, particle_(particle) {}

    void set_step(std::uint64_t step) {
        step_ = step;
        blk_ = 0;
        pos_ = 4;
        have_normal_ = false;
    }

    /// Uniform strictly inside (0, 1).
    double uniform() {
        if (pos_ >= 4) refill();
        std::uint64_t x = buf_[pos_++];
        return ((double)(x >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform()); }

    /// Standard normal via Box-Muller (pairs cached within a step).
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(2.0 * M_PI * u2), s = std::sin(2.0 * M_PI * u2);
        cached_ = r * s;
        have_normal_ = true;
        return r * c;
    }

  private:
    void refill() {
        buf_ = Philox4x64::block({particle_, step_, blk_++, 0}, key_);
        pos_ = 0;
    }

    std::array<std::uint64_t, 2> key_;
    std::uint64_t particle_ = 0;
    std::uint64_t step_ = 0;
    std::uint64_t blk_ = 0;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
    bool have_normal_ = false;
    double cached_ = 0.0;
};

} // namespace fdlab::mc
