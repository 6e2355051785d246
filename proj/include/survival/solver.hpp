#pragma once

#include "survival/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include <fmt/format.h>

namespace survival {

struct RootOptions {
    double x_tolerance = 1e-12;
    std::uintmax_t max_iterations = 200;
};

/// Root of a continuous function with a sign change on [lo, hi].
///
/// Uses TOMS 748 (bracketing, superlinear). `what` names the quantity in
/// error messages, which always state the bracket.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, const std::string& what, RootOptions opt = {}) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
        throw NoSolutionError(fmt::format("{}: objective not finite on bracket [{}, {}]", what, lo, hi));
    if (f_lo == 0.0)
        return lo;
    if (f_hi == 0.0)
        return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw NoSolutionError(
            fmt::format("{}: no solution in bracket [{}, {}] (target unattainable)", what, lo, hi));

    const double tol = opt.x_tolerance;
    auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    std::uintmax_t iterations = opt.max_iterations;
    const auto [a, b] =
        boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, iterations);
    if (!done(a, b))
        throw NoSolutionError(fmt::format("{}: root search did not converge in {} iterations on [{}, {}]",
                                          what, opt.max_iterations, lo, hi));
    return 0.5 * (a + b);
}

} // namespace survival
