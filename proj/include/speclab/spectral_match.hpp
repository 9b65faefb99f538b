#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace speclab {

struct MatchedPair {
    int first = 0;  ///< index into the first list
    int second = 0; ///< index into the second list
    double distance = 0.0;
};

struct Pairing {
    std::vector<MatchedPair> pairs;
    int unmatched_first = 0;
    int unmatched_second = 0;
};

/// Greedy nearest-pair matching: all cross distances are visited in
/// ascending order and a pair is accepted when both points are still free
/// and the distance is at most `tol`. Injective both ways.
Pairing greedy_pairing(std::span<const std::complex<double>> first,
                       std::span<const std::complex<double>> second,
                       double tol = std::numeric_limits<double>::infinity());

/// Largest pair distance of the complete greedy pairing of two equally sized
/// multisets; +inf when the sizes differ.
double multiset_distance(std::span<const std::complex<double>> first,
                         std::span<const std::complex<double>> second);

} // namespace speclab
