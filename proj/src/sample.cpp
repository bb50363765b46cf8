#include "sieverank/sample.hpp"

#include <cmath>
#include <string>

#include "sieverank/errors.hpp"

namespace sieverank {
namespace {

void check_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DataError(std::string("non-finite value in ") + what + " at flat index " +
                            std::to_string(i));
        }
    }
}

}  // namespace

Sample::Sample(std::vector<double> y, Matrix z, std::optional<Matrix> w)
    : y_(std::move(y)), z_(std::move(z)), w_(std::move(w)) {
    if (z_.rows() != y_.size()) {
        throw DataError("sample: y has " + std::to_string(y_.size()) + " rows, z has " +
                        std::to_string(z_.rows()));
    }
    if (w_ && w_->rows() != y_.size()) {
        throw DataError("sample: y has " + std::to_string(y_.size()) + " rows, w has " +
                        std::to_string(w_->rows()));
    }
    check_finite(y_, "y");
    check_finite(z_.data(), "z");
    if (w_) check_finite(w_->data(), "w");
}

const Matrix& Sample::w() const {
    if (!w_) throw ConfigError("sample has no control variables W");
    return *w_;
}

Sample Sample::subset(std::span<const std::size_t> rows) const {
    std::vector<double> y(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) y[k] = y_[rows[k]];
    std::optional<Matrix> w;
    if (w_) w = w_->select_rows(rows);
    return Sample(std::move(y), z_.select_rows(rows), std::move(w));
}

}  // namespace sieverank
