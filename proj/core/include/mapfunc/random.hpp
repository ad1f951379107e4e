#pragma once

#include <cmath>
#include <cstdint>

namespace mapfunc {

//---------------------------------------------------------------------------//
/*!
 * \brief Counter-based random stream.
 *
 * Output n of stream (seed, index) is mix64(key + (n + 1) * golden), with the
 * key derived from the seed and index by the same finalizer. Streams are
 * therefore addressable and independent of scheduling order.
 */
class RandomStream {
  public:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    RandomStream(std::uint64_t seed, std::uint64_t index) noexcept
        : key_(mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + mix64(index + golden)))
    {
    }

    //! Child stream, deterministic in (this key, child index).
    RandomStream substream(std::uint64_t child) const noexcept
    {
        return RandomStream(key_, child);
    }

    std::uint64_t next_u64() noexcept
    {
        counter_ += golden;
        return mix64(key_ + counter_);
    }

    //! Uniform on the open interval (0, 1).
    double uniform() noexcept
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    //! Exponential with the given rate.
    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

    //! Standard normal by the polar method, caching the second variate.
    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double const f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    //! Poisson count from unit-rate exponential arrivals.
    std::uint64_t poisson(double mean) noexcept
    {
        std::uint64_t k = 0;
        double t = exponential(1.0);
        while (t < mean) {
            ++k;
            t += exponential(1.0);
        }
        return k;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mapfunc
