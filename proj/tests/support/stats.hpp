#ifndef HYCOL_TESTS_STATS_HPP
#define HYCOL_TESTS_STATS_HPP

// Test-side statistics helpers, independent of the library under test.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace teststats {

// Regularized upper incomplete gamma Q(a, x), series / continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // lower series, Q = 1 - P
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - lg);
        return 1.0 - p;
    }
    // continued fraction for Q
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

// Goodness-of-fit p-value of observed counts against expected probabilities.
inline double chi_square_pvalue(std::span<const std::uint64_t> observed, std::span<const double> expected_prob) {
    if (observed.size() != expected_prob.size()) throw std::invalid_argument("chi_square: size mismatch");
    std::uint64_t total = 0;
    for (auto c : observed) total += c;
    double stat = 0;
    int dof = -1;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expect = expected_prob[i] * static_cast<double>(total);
        if (expect <= 0) {
            if (observed[i] != 0) return 0.0; // mass observed where none is possible
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expect;
        stat += diff * diff / expect;
        ++dof;
    }
    if (dof <= 0) return 1.0;
    return gamma_q(dof / 2.0, stat / 2.0);
}

inline double binomial_stderr(double p, std::uint64_t n) {
    return std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(n)));
}

} // namespace teststats

#endif // HYCOL_TESTS_STATS_HPP
