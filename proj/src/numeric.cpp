#include "seqlep/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace seqlep {

double compensated_sum(std::span<const double> terms) noexcept {
    CompensatedSum acc;
    for (const double t : terms) {
        acc.add(t);
    }
    return acc.value();
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14, &error);
}

}  // namespace seqlep
