#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qnslab {

using cplx = std::complex<double>;

constexpr double PI = 3.141592653589793238462643383279502884;

/// Compensated (Kahan) accumulator. All norm/quadrature reductions in the
/// project run through this in a fixed order so results are bit-stable.
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double kahan_total(const std::vector<double>& xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

/// splitmix64: tiny, portable, deterministic PRNG. Used for all test-family
/// generation so reports are reproducible across platforms.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// uniform in [0,1)
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    /// uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

  private:
    std::uint64_t state_;
};

/// Chunked deterministic parallel map: the index range is split into
/// fixed-size chunks independent of the worker count, each chunk writes its
/// own result slot, and the caller combines slots in chunk order. Output is
/// therefore identical for any number of workers.
void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t chunk_index, std::size_t begin,
                                              std::size_t end)>& body,
                     int threads);

std::size_t chunk_count(std::size_t count, std::size_t chunk);

/// Worker count resolution: explicit argument wins, then QNSLAB_THREADS, then 1.
int resolve_threads(int requested = 0);

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline double sqr(double x) { return x * x; }

}  // namespace qnslab
