#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "qfa/scalar.hpp"

namespace qfa {

// Dense row-major complex matrix. All entries live on one backend; the
// backend is a property of the whole matrix, and binary operations require
// both operands to agree.
class Matrix {
  public:
    using ExactData = std::vector<ExactComplex>;
    using FloatData = std::vector<FloatComplex>;

    Matrix() : rows_(0), cols_(0), data_(ExactData{}) {}

    static Matrix zeros(Backend b, std::size_t rows, std::size_t cols);
    static Matrix identity(Backend b, std::size_t n);
    // Entries row-major; every scalar must match `b`.
    static Matrix from_scalars(Backend b, std::size_t rows, std::size_t cols,
                               const std::vector<Scalar>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Backend backend() const {
        return std::holds_alternative<ExactData>(data_) ? Backend::exact : Backend::floating;
    }
    bool is_row() const { return rows_ == 1; }
    bool is_col() const { return cols_ == 1; }
    bool is_square() const { return rows_ == cols_; }

    Scalar at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Scalar& v);

    Matrix transpose() const;
    Matrix entrywise_conj() const;
    Matrix row_slice(std::size_t i) const;
    Matrix col_slice(std::size_t j) const;
    Matrix to_float() const;

    bool all_entries_real() const;           // imaginary parts exactly zero
    double max_abs() const;                  // largest entry modulus
    double max_abs_diff(const Matrix& o) const;  // same shape and backend

    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }
    friend bool operator==(const Matrix& a, const Matrix& b);
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    friend Matrix mat_mul(const Matrix& a, const Matrix& b);
    friend Matrix kron(const Matrix& a, const Matrix& b);
    friend Matrix conj_transpose(const Matrix& a);

    // Typed access to the raw storage; throws std::bad_variant_access on a
    // backend mismatch. Used by backend-monomorphic inner loops.
    template <class T>
    const std::vector<T>& cells() const {
        return std::get<std::vector<T>>(data_);
    }
    template <class T>
    std::vector<T>& cells() {
        return std::get<std::vector<T>>(data_);
    }

  private:
    std::size_t rows_, cols_;
    std::variant<ExactData, FloatData> data_;

    Matrix(std::size_t r, std::size_t c, ExactData d) : rows_(r), cols_(c), data_(std::move(d)) {}
    Matrix(std::size_t r, std::size_t c, FloatData d) : rows_(r), cols_(c), data_(std::move(d)) {}
};

// Squared Euclidean norm of a 1×n row vector, as a real scalar on the input's
// backend. The exact backend stays within the rationals here, which is why
// downstream probability formulas consume squared norms.
Scalar norm_sq(const Matrix& row);

// Norm of a 1×n row. Float inputs always succeed; exact inputs succeed only
// when the squared norm is a perfect square of a rational (else the value
// would leave the backend, and norm_sq is the supported interface).
Scalar row_norm(const Matrix& row);

// True iff M·M† deviates from the identity by at most `tol` per entry. On the
// exact backend the comparison is exact and `tol` is ignored.
bool is_unitary(const Matrix& m, double tol = 1e-9);

}  // namespace qfa
