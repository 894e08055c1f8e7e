#pragma once

#include <array>
#include <cstdint>

namespace rcw {

// Philox4x32-10 counter-based generator. Each draw is a pure function of
// (key, counter), so substreams keyed by (master_seed, tag, id) produce the
// same values no matter in which order, or on how many threads, they are
// consumed.
namespace philox {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

}  // namespace philox

// Substream tags; they keep draws for different purposes disjoint even when
// the numeric ids collide.
enum class StreamTag : std::uint32_t {
    edge = 1,   // per-edge conductance draws
    walk = 2,   // trajectory simulation
    trial = 3,  // exit-time and confinement trials (shared, so the two
                // estimators see identical trajectories on shared keys)
};

// A sequential view of one substream. The counter layout is
// (tag, id_a, id_b ^ block_hi, block_lo); id_b is typically an edge or walk
// id below 2^32, so mixing the block counter into the high word is safe for
// any realistic stream length.
class CounterStream {
  public:
    CounterStream(std::uint64_t master_seed, StreamTag tag, std::uint32_t id_a,
                  std::uint64_t id_b)
        : key_{static_cast<std::uint32_t>(master_seed),
               static_cast<std::uint32_t>(master_seed >> 32)},
          base_{static_cast<std::uint32_t>(tag), id_a,
                static_cast<std::uint32_t>(id_b),
                static_cast<std::uint32_t>(id_b >> 32)} {}

    std::uint64_t next_u64() {
        if (phase_ == 0) {
            auto ctr = base_;
            ctr[3] ^= static_cast<std::uint32_t>(block_);
            ctr[2] ^= static_cast<std::uint32_t>(block_ >> 32) << 16;
            buf_ = philox::block(ctr, key_);
            ++block_;
            phase_ = 1;
            return (static_cast<std::uint64_t>(buf_[0]) << 32) | buf_[1];
        }
        phase_ = 0;
        return (static_cast<std::uint64_t>(buf_[2]) << 32) | buf_[3];
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Index in [0, n); n must be small (neighbor fan-out), so the modulo
    // bias of ~n / 2^64 is irrelevant.
    std::uint32_t next_index(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::array<std::uint32_t, 4> buf_{};
    std::uint64_t block_ = 0;
    int phase_ = 0;
};

// One-shot draw, used for per-edge conductances: the value depends only on
// the key tuple, never on sampling order.
inline double keyed_uniform01(std::uint64_t master_seed, StreamTag tag,
                              std::uint32_t id_a, std::uint64_t id_b) {
    const std::array<std::uint32_t, 2> key{
        static_cast<std::uint32_t>(master_seed),
        static_cast<std::uint32_t>(master_seed >> 32)};
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(tag), id_a, static_cast<std::uint32_t>(id_b),
        static_cast<std::uint32_t>(id_b >> 32)};
    const auto out = philox::block(ctr, key);
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace rcw
