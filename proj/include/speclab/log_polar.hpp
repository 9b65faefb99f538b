#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>

namespace speclab {

/// A complex number stored as (log|w|, arg w). Exact zero is represented by
/// log_magnitude = -inf with `singular` set; the phase is then meaningless.
struct LogPolar {
    double log_magnitude = 0.0;
    double phase = 0.0;
    bool singular = false;
    /// Set when the value was obtained through severe cancellation.
    bool reduced_precision = false;

    static LogPolar zero()
    {
        return {-std::numeric_limits<double>::infinity(), 0.0, true, false};
    }

    static LogPolar from_log(std::complex<double> log_value)
    {
        return {log_value.real(), log_value.imag(), false, false};
    }

    /// exp(log_magnitude + i phase); over/underflows for large |log_magnitude|.
    std::complex<double> value() const
    {
        if (singular) {
            return {0.0, 0.0};
        }
        return std::polar(std::exp(log_magnitude), phase);
    }
};

/// Maps an angle to (-pi, pi].
inline double wrap_phase(double angle)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(angle, two_pi);
    if (w <= -std::numbers::pi) {
        w += two_pi;
    }
    return w;
}

/// Sum of terms given by their complex logarithms, evaluated with the largest
/// magnitude factored out. Flags reduced precision when the sum is smaller
/// than `cancellation` times the largest term.
inline LogPolar log_sum_exp(std::span<const std::complex<double>> logs, double cancellation = 1e-12)
{
    double largest = -std::numeric_limits<double>::infinity();
    for (const auto& l : logs) {
        largest = std::max(largest, l.real());
    }
    if (!std::isfinite(largest)) {
        return LogPolar::zero();
    }
    std::complex<double> acc{0.0, 0.0};
    for (const auto& l : logs) {
        if (std::isfinite(l.real())) {
            acc += std::polar(std::exp(l.real() - largest), l.imag());
        }
    }
    const double magnitude = std::abs(acc);
    if (magnitude == 0.0) {
        auto z = LogPolar::zero();
        z.reduced_precision = true;
        return z;
    }
    LogPolar out{largest + std::log(magnitude), std::arg(acc), false, magnitude < cancellation};
    return out;
}

} // namespace speclab
