#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace speclab {

using cplx = std::complex<double>;

/// Counter-based 64-bit generator. Every output is a pure function of
/// (key, counter), so streams keyed by (seed, sample, entry) do not depend on
/// evaluation order. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    constexpr explicit CounterRng(std::uint64_t key) noexcept : key_{key} {}
    CounterRng(std::uint64_t base_seed, std::uint64_t index, std::uint64_t position) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return mix(key_ + kGolden * ++counter_); }

    constexpr std::uint64_t key() const noexcept { return key_; }

    /// SplitMix64 finalizer.
    static constexpr std::uint64_t mix(std::uint64_t x) noexcept
    {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Uniform double in [0, 1) from the top 53 bits. Bit-portable, unlike
/// std::uniform_real_distribution.
template <class Rng>
double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in the open interval (0, 1).
template <class Rng>
double uniform_open01(Rng& rng)
{
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform point of the closed unit disk: radius sqrt(u), angle 2*pi*v.
template <class Rng>
cplx sample_unit_disk(Rng& rng)
{
    const double radius = std::sqrt(uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    return std::polar(radius, angle);
}

enum class EnsembleKind { UniformUnitDisk, HermitianHN };

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::UniformUnitDisk;
    int n = 100;
    double width = 3.5; ///< half-width of a_k for HermitianHN
    int sample_count = 1;
    std::uint64_t base_seed = 0;
};

/// Entries {a_k, b_k, c_k} of one realization. b(n-1) is the bottom-left
/// corner, c(0) the top-right corner.
struct MatrixSample {
    Eigen::VectorXcd a;
    Eigen::VectorXcd b;
    Eigen::VectorXcd c;
    std::uint64_t seed = 0;

    int n() const noexcept { return static_cast<int>(a.size()); }
};

/// Throws InvalidArgument unless the three diagonals share a length n >= 3.
void validate(const MatrixSample& s);

/// Sample `index` of the ensemble. Dispatches on spec.kind.
MatrixSample sample_matrix(const EnsembleSpec& spec, int index);

/// b_k = c_k = 1, a_k real uniform in (-width, width).
MatrixSample sample_hermitian_hn(const EnsembleSpec& spec, int index);

/// Per-sample provenance seed derived from (base_seed, index).
std::uint64_t sample_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

} // namespace speclab
