#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sieverank {

struct NelderMeadOptions {
    int max_iters = 1000;
    double ftol = 1e-10;        // stop when best - worst vertex value < ftol
    double xtol = 1e-6;         // or when every vertex is within xtol (max-norm) of the best
    double initial_step = 1.0;  // edge length of the axis-aligned starting simplex
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    bool plateau = false;  // stopped because all vertices had (nearly) equal values
};

/// Derivative-free maximization with the standard reflection (1), expansion
/// (2), contraction (1/2) and shrink (1/2) coefficients.
///
/// Suited to piecewise-constant objectives: when the simplex lies on a
/// plateau its centroid is returned if it scores at least as well as the best
/// vertex.
NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& options);

}  // namespace sieverank
