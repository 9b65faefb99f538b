#include "speclab/spectral_match.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace speclab {

Pairing greedy_pairing(std::span<const std::complex<double>> first,
                       std::span<const std::complex<double>> second, double tol)
{
    struct Candidate {
        double distance;
        int i;
        int j;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(first.size() * second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        for (std::size_t j = 0; j < second.size(); ++j) {
            const double dist = std::abs(first[i] - second[j]);
            if (dist <= tol) {
                candidates.push_back({dist, static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }
    // ties broken by index so the result does not depend on sort stability
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.distance != y.distance) {
            return x.distance < y.distance;
        }
        return x.i != y.i ? x.i < y.i : x.j < y.j;
    });

    std::vector<char> used_first(first.size(), 0);
    std::vector<char> used_second(second.size(), 0);
    Pairing out;
    for (const auto& c : candidates) {
        if (used_first[c.i] || used_second[c.j]) {
            continue;
        }
        used_first[c.i] = 1;
        used_second[c.j] = 1;
        out.pairs.push_back({c.i, c.j, c.distance});
    }
    out.unmatched_first = static_cast<int>(first.size() - out.pairs.size());
    out.unmatched_second = static_cast<int>(second.size() - out.pairs.size());
    return out;
}

double multiset_distance(std::span<const std::complex<double>> first,
                         std::span<const std::complex<double>> second)
{
    if (first.size() != second.size()) {
        return std::numeric_limits<double>::infinity();
    }
    const Pairing p = greedy_pairing(first, second);
    double worst = 0.0;
    for (const auto& m : p.pairs) {
        worst = std::max(worst, m.distance);
    }
    return worst;
}

} // namespace speclab
