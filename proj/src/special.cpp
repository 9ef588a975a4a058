#include "camboost/special.hpp"

#include <cmath>
#include <stdexcept>

namespace camboost {

namespace {

// Lentz's algorithm for the continued fraction of I_x(a, b); converges
// quickly for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("regularized_incomplete_beta: a and b must be positive");
    }
    if (!(x >= 0.0) || !(x <= 1.0)) {
        throw std::invalid_argument("regularized_incomplete_beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_distribution_cdf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        throw std::invalid_argument("f_distribution_cdf: degrees of freedom must be positive");
    }
    if (f <= 0.0) return 0.0;
    const double x = d1 * f / (d1 * f + d2);
    return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, x);
}

double f_distribution_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        throw std::invalid_argument("f_distribution_sf: degrees of freedom must be positive");
    }
    if (f <= 0.0) return 1.0;
    const double x = d2 / (d1 * f + d2);
    return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, x);
}

}  // namespace camboost
