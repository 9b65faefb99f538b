#include "speclab/ensemble.hpp"

#include "speclab/error.hpp"

#include <string>

namespace speclab {

namespace {

constexpr std::uint64_t kIndexSalt = 0xd1b54a32d192ed03ULL;
constexpr std::uint64_t kPositionSalt = 0x8cb92ba72f3d8dd7ULL;

void check_spec(const EnsembleSpec& spec, int index)
{
    if (spec.n < 3) {
        throw InvalidArgument("matrix size n = " + std::to_string(spec.n) +
                              " is below the minimum of 3");
    }
    if (index < 0 || index >= spec.sample_count) {
        throw InvalidArgument("sample index " + std::to_string(index) + " outside [0, " +
                              std::to_string(spec.sample_count) + ")");
    }
}

} // namespace

CounterRng::CounterRng(std::uint64_t base_seed, std::uint64_t index, std::uint64_t position) noexcept
    : key_{mix(mix(mix(base_seed + kGolden) ^ (index * kIndexSalt)) ^ (position * kPositionSalt))}
{
}

std::uint64_t sample_seed(std::uint64_t base_seed, std::uint64_t index) noexcept
{
    return CounterRng::mix(CounterRng::mix(base_seed + CounterRng::kGolden) ^ (index * kIndexSalt));
}

void validate(const MatrixSample& s)
{
    const auto n = s.a.size();
    if (n < 3) {
        throw InvalidArgument("matrix size n = " + std::to_string(n) + " is below the minimum of 3");
    }
    if (s.b.size() != n || s.c.size() != n) {
        throw InvalidArgument("diagonals a, b, c must have equal length");
    }
}

MatrixSample sample_matrix(const EnsembleSpec& spec, int index)
{
    if (spec.kind == EnsembleKind::HermitianHN) {
        return sample_hermitian_hn(spec, index);
    }
    check_spec(spec, index);

    const int n = spec.n;
    MatrixSample s;
    s.a.resize(n);
    s.b.resize(n);
    s.c.resize(n);
    s.seed = sample_seed(spec.base_seed, static_cast<std::uint64_t>(index));
    for (int k = 0; k < n; ++k) {
        const auto pos = 3 * static_cast<std::uint64_t>(k);
        CounterRng ra{spec.base_seed, static_cast<std::uint64_t>(index), pos};
        CounterRng rb{spec.base_seed, static_cast<std::uint64_t>(index), pos + 1};
        CounterRng rc{spec.base_seed, static_cast<std::uint64_t>(index), pos + 2};
        s.a[k] = sample_unit_disk(ra);
        s.b[k] = sample_unit_disk(rb);
        s.c[k] = sample_unit_disk(rc);
    }
    return s;
}

MatrixSample sample_hermitian_hn(const EnsembleSpec& spec, int index)
{
    check_spec(spec, index);
    if (!(spec.width > 0.0)) {
        throw InvalidArgument("hermitian-hn ensemble needs width > 0");
    }

    const int n = spec.n;
    MatrixSample s;
    s.a.resize(n);
    s.b = Eigen::VectorXcd::Ones(n);
    s.c = Eigen::VectorXcd::Ones(n);
    s.seed = sample_seed(spec.base_seed, static_cast<std::uint64_t>(index));
    for (int k = 0; k < n; ++k) {
        CounterRng ra{spec.base_seed, static_cast<std::uint64_t>(index), 3 * static_cast<std::uint64_t>(k)};
        s.a[k] = spec.width * (2.0 * uniform_open01(ra) - 1.0);
    }
    return s;
}

} // namespace speclab
