#pragma once

#include <span>
#include <vector>

#include "isqnls/errors.hpp"

namespace isqnls {

/// Symmetric tridiagonal matrix: `diag` of length n, `off` of length n-1.
template <class T>
struct SymTridiagonal {
    std::vector<T> diag;
    std::vector<T> off;

    std::size_t size() const noexcept { return diag.size(); }
};

/// Thomas algorithm without pivoting. Stable for the matrices built here
/// (real SPD, or complex symmetric with positive definite real part).
template <class T, class U>
void solve_tridiagonal(SymTridiagonal<T> const& m, std::span<U const> rhs, std::span<U> x) {
    auto const n = m.size();
    if (rhs.size() != n || x.size() != n) throw NumericalError("tridiagonal size mismatch");
    std::vector<T> c(n);
    T denom = m.diag[0];
    if (denom == T{}) throw NumericalError("zero pivot in tridiagonal solve");
    c[0] = n > 1 ? m.off[0] / denom : T{};
    x[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = m.diag[i] - m.off[i - 1] * c[i - 1];
        if (denom == T{}) throw NumericalError("zero pivot in tridiagonal solve");
        if (i + 1 < n) c[i] = m.off[i] / denom;
        x[i] = (rhs[i] - m.off[i - 1] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
}

} // namespace isqnls
