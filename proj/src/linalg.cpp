#include "helm/linalg.hpp"

#include <numeric>
#include <utility>

namespace helm {

ComplexVector ComplexMatrix::multiply(const ComplexVector& x) const {
    ComplexVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Complex acc;
        for (std::size_t c = 0; c < cols_; ++c) acc.add_mul((*this)(r, c), x[c]);
        y[r] = acc;
    }
    return y;
}

Real ComplexMatrix::max_abs() const {
    Real m(0);
    for (const auto& v : data_) {
        Real a = abs(v);
        if (a > m) m = a;
    }
    return m;
}

Real singular_threshold(const Real& max_abs) {
    Real one(1);
    return boost::multiprecision::ldexp(one, -current_precision_bits() / 2) * max_abs;
}

LuFactorization::LuFactorization(ComplexMatrix a) : original_(std::move(a)) {
    if (original_.rows() != original_.cols()) throw std::invalid_argument("LU of non-square matrix");
    Real scale = original_.max_abs();
    if (original_.rows() > 0 && scale == 0) throw SingularMatrixError("zero matrix", 0.0);
    Real threshold = singular_threshold(scale);
    if (factor(Pivoting::Partial, threshold)) return;
    if (factor(Pivoting::Complete, threshold)) return;
    throw SingularMatrixError("singular matrix", pivot_ratio_);
}

bool LuFactorization::factor(Pivoting mode, const Real& threshold) {
    const std::size_t n = original_.rows();
    lu_ = original_;
    row_perm_.resize(n);
    col_perm_.resize(n);
    std::iota(row_perm_.begin(), row_perm_.end(), 0);
    std::iota(col_perm_.begin(), col_perm_.end(), 0);
    sign_ = 1;
    pivoting_ = mode;
    Real scale = original_.max_abs();
    Real min_pivot = scale;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k, pc = k;
        Real best(-1);
        if (mode == Pivoting::Partial) {
            for (std::size_t r = k; r < n; ++r) {
                Real v = norm(lu_(r, k));
                if (v > best) {
                    best = std::move(v);
                    pr = r;
                }
            }
        } else {
            for (std::size_t r = k; r < n; ++r)
                for (std::size_t c = k; c < n; ++c) {
                    Real v = norm(lu_(r, c));
                    if (v > best) {
                        best = std::move(v);
                        pr = r;
                        pc = c;
                    }
                }
        }
        Real pivot_abs = boost::multiprecision::sqrt(best);
        if (pivot_abs < min_pivot) min_pivot = pivot_abs;
        if (pivot_abs <= threshold) {
            pivot_ratio_ = scale > 0 ? to_double(min_pivot / scale) : 0.0;
            return false;
        }
        if (pr != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(pr, c));
            std::swap(row_perm_[k], row_perm_[pr]);
            sign_ = -sign_;
        }
        if (pc != k) {
            for (std::size_t r = 0; r < n; ++r) std::swap(lu_(r, k), lu_(r, pc));
            std::swap(col_perm_[k], col_perm_[pc]);
            sign_ = -sign_;
        }
        Complex inv = Complex(1) / lu_(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            if (lu_(r, k).is_zero()) continue;
            Complex f = lu_(r, k) * inv;
            lu_(r, k) = f;
            for (std::size_t c = k + 1; c < n; ++c) lu_(r, c).sub_mul(f, lu_(k, c));
        }
    }
    pivot_ratio_ = scale > 0 ? to_double(min_pivot / scale) : 1.0;
    return true;
}

ComplexVector LuFactorization::solve(const ComplexVector& b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw std::invalid_argument("LU solve: size mismatch");
    ComplexVector y(n);
    for (std::size_t r = 0; r < n; ++r) {
        Complex acc = b[row_perm_[r]];
        for (std::size_t c = 0; c < r; ++c) acc.sub_mul(lu_(r, c), y[c]);
        y[r] = std::move(acc);
    }
    for (std::size_t r = n; r-- > 0;) {
        Complex acc = y[r];
        for (std::size_t c = r + 1; c < n; ++c) acc.sub_mul(lu_(r, c), y[c]);
        y[r] = acc / lu_(r, r);
    }
    ComplexVector x(n);
    for (std::size_t k = 0; k < n; ++k) x[col_perm_[k]] = std::move(y[k]);
    return x;
}

Complex LuFactorization::determinant() const {
    Complex d(sign_);
    for (std::size_t k = 0; k < lu_.rows(); ++k) d *= lu_(k, k);
    return d;
}

}  // namespace helm
