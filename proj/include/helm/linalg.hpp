#pragma once

#include "helm/numeric.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace helm {

using ComplexVector = std::vector<Complex>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    ComplexVector multiply(const ComplexVector& x) const;
    Real max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double pivot_ratio)
        : std::runtime_error(what), pivot_ratio_(pivot_ratio) {}
    /// Smallest accepted pivot relative to the largest matrix entry.
    double pivot_ratio() const { return pivot_ratio_; }

private:
    double pivot_ratio_;
};

enum class Pivoting { Partial, Complete };

/// LU factorization at working precision. Partial pivoting is tried first;
/// complete pivoting is used when a partial-pivot step stalls.
class LuFactorization {
public:
    explicit LuFactorization(ComplexMatrix a);

    ComplexVector solve(const ComplexVector& b) const;
    Complex determinant() const;
    Pivoting pivoting() const { return pivoting_; }
    /// min |pivot| / max |a_ij|, a cheap conditioning diagnostic.
    double pivot_ratio() const { return pivot_ratio_; }
    std::size_t size() const { return lu_.rows(); }

private:
    bool factor(Pivoting mode, const Real& threshold);

    ComplexMatrix original_;
    ComplexMatrix lu_;
    std::vector<std::size_t> row_perm_;
    std::vector<std::size_t> col_perm_;
    int sign_ = 1;
    Pivoting pivoting_ = Pivoting::Partial;
    double pivot_ratio_ = 0.0;
};

/// Pivot threshold: pivots below 2^(-bits/2) * max|a| are treated as zero.
Real singular_threshold(const Real& max_abs);

}  // namespace helm
