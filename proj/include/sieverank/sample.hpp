#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sieverank/matrix.hpp"

namespace sieverank {

/// Observed data: outcome y, special regressors z (n x d_z) and optional
/// controls w (n x d_w). Construction rejects NaN/inf and inconsistent sizes.
class Sample {
public:
    Sample() = default;
    Sample(std::vector<double> y, Matrix z, std::optional<Matrix> w = std::nullopt);

    std::size_t size() const { return y_.size(); }
    std::span<const double> y() const { return y_; }
    const Matrix& z() const { return z_; }
    bool has_w() const { return w_.has_value(); }
    /// Throws ConfigError if the sample has no controls.
    const Matrix& w() const;

    Sample subset(std::span<const std::size_t> rows) const;

    bool operator==(const Sample&) const = default;

private:
    std::vector<double> y_;
    Matrix z_;
    std::optional<Matrix> w_;
};

}  // namespace sieverank
