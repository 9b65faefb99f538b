#include "speclab/operators.hpp"

#include <cmath>

namespace speclab {

Deformation::Deformation(double xi, double phi) : xi_{xi}
{
    if (!std::isfinite(xi) || !std::isfinite(phi)) {
        throw InvalidArgument("deformation parameters must be finite");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi_ = std::fmod(phi, two_pi);
    if (phi_ < 0.0) {
        phi_ += two_pi;
    }
    if (phi_ >= two_pi) {
        phi_ = 0.0;
    }
}

} // namespace speclab
