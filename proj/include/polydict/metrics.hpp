#pragma once

#include <polydict/error.hpp>
#include <polydict/polymat.hpp>

namespace polydict {

/// Relative squared reconstruction error ||Y - Yhat||_F^2 / ||Y||_F^2.
inline double reconstruction_error(const PolyMatrix& y, const PolyMatrix& y_hat)
{
    detail::require_same_shape(y, y_hat, "reconstruction_error");
    const double denom = fnorm_squared(y);
    if (denom == 0.0) {
        throw ZeroSignalError("reconstruction_error: reference signal is identically zero");
    }
    auto a = y.coefficients();
    auto b = y_hat.coefficients();
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        num += d * d;
    }
    return num / denom;
}

} // namespace polydict
