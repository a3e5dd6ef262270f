#include "qfa/matrix.hpp"

#include <cmath>
#include <string>

namespace qfa {

namespace {

std::string dim_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_backend(const Matrix& a, const Matrix& b, const char* op) {
    if (a.backend() != b.backend())
        throw BackendError(std::string("backend mismatch in ") + op + ": " +
                           to_string(a.backend()) + " vs " + to_string(b.backend()));
}

template <class T>
T conj_of(const T& v);

template <>
ExactComplex conj_of(const ExactComplex& v) {
    return v.conj();
}
template <>
FloatComplex conj_of(const FloatComplex& v) {
    return std::conj(v);
}

double abs_of(const ExactComplex& v) { return v.abs(); }
double abs_of(const FloatComplex& v) { return std::abs(v); }

template <class T>
std::vector<T> mul_cells(const std::vector<T>& a, const std::vector<T>& b, std::size_t n,
                         std::size_t m, std::size_t p) {
    std::vector<T> out(n * p, T{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const T& aik = a[i * m + k];
            for (std::size_t j = 0; j < p; ++j) out[i * p + j] = out[i * p + j] + aik * b[k * p + j];
        }
    }
    return out;
}

template <class T>
std::vector<T> kron_cells(const std::vector<T>& a, std::size_t ar, std::size_t ac,
                          const std::vector<T>& b, std::size_t br, std::size_t bc) {
    std::vector<T> out(ar * br * ac * bc, T{});
    const std::size_t oc = ac * bc;
    for (std::size_t i1 = 0; i1 < ar; ++i1)
        for (std::size_t j1 = 0; j1 < ac; ++j1) {
            const T& aij = a[i1 * ac + j1];
            for (std::size_t i2 = 0; i2 < br; ++i2)
                for (std::size_t j2 = 0; j2 < bc; ++j2)
                    out[(i1 * br + i2) * oc + (j1 * bc + j2)] = aij * b[i2 * bc + j2];
        }
    return out;
}

}  // namespace

Matrix Matrix::zeros(Backend b, std::size_t rows, std::size_t cols) {
    if (b == Backend::exact) return Matrix(rows, cols, ExactData(rows * cols));
    return Matrix(rows, cols, FloatData(rows * cols, FloatComplex{0.0, 0.0}));
}

Matrix Matrix::identity(Backend b, std::size_t n) {
    Matrix m = zeros(b, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Scalar::one(b));
    return m;
}

Matrix Matrix::from_scalars(Backend b, std::size_t rows, std::size_t cols,
                            const std::vector<Scalar>& entries) {
    if (entries.size() != rows * cols)
        throw DimensionError("entry count " + std::to_string(entries.size()) + " does not match " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    Matrix m = zeros(b, rows, cols);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].backend() != b)
            throw BackendError("matrix entry backend does not match the matrix backend");
        if (b == Backend::exact)
            m.cells<ExactComplex>()[i] = entries[i].exact_value();
        else
            m.cells<FloatComplex>()[i] = entries[i].float_value();
    }
    return m;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw DimensionError("matrix index out of range");
    if (const auto* e = std::get_if<ExactData>(&data_)) return Scalar((*e)[i * cols_ + j]);
    return Scalar(std::get<FloatData>(data_)[i * cols_ + j]);
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v) {
    if (i >= rows_ || j >= cols_) throw DimensionError("matrix index out of range");
    if (v.backend() != backend()) throw BackendError("entry backend does not match the matrix");
    if (auto* e = std::get_if<ExactData>(&data_))
        (*e)[i * cols_ + j] = v.exact_value();
    else
        std::get<FloatData>(data_)[i * cols_ + j] = v.float_value();
}

Matrix Matrix::transpose() const {
    Matrix out = zeros(backend(), cols_, rows_);
    auto work = [&](const auto& cells, auto& ocells) {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) ocells[j * rows_ + i] = cells[i * cols_ + j];
    };
    if (backend() == Backend::exact)
        work(cells<ExactComplex>(), out.cells<ExactComplex>());
    else
        work(cells<FloatComplex>(), out.cells<FloatComplex>());
    return out;
}

Matrix Matrix::entrywise_conj() const {
    Matrix out = *this;
    if (backend() == Backend::exact) {
        for (auto& v : out.cells<ExactComplex>()) v = v.conj();
    } else {
        for (auto& v : out.cells<FloatComplex>()) v = std::conj(v);
    }
    return out;
}

Matrix conj_transpose(const Matrix& a) {
    return a.transpose().entrywise_conj();
}

Matrix Matrix::row_slice(std::size_t i) const {
    if (i >= rows_) throw DimensionError("row index out of range");
    Matrix out = zeros(backend(), 1, cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.set(0, j, at(i, j));
    return out;
}

Matrix Matrix::col_slice(std::size_t j) const {
    if (j >= cols_) throw DimensionError("column index out of range");
    Matrix out = zeros(backend(), rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) out.set(i, 0, at(i, j));
    return out;
}

Matrix Matrix::to_float() const {
    if (backend() == Backend::floating) return *this;
    Matrix out = zeros(Backend::floating, rows_, cols_);
    const auto& src = cells<ExactComplex>();
    auto& dst = out.cells<FloatComplex>();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].to_float();
    return out;
}

bool Matrix::all_entries_real() const {
    if (const auto* e = std::get_if<ExactData>(&data_)) {
        for (const auto& v : *e)
            if (!v.is_real()) return false;
        return true;
    }
    for (const auto& v : std::get<FloatData>(data_))
        if (v.imag() != 0.0) return false;
    return true;
}

double Matrix::max_abs() const {
    double m = 0.0;
    if (const auto* e = std::get_if<ExactData>(&data_)) {
        for (const auto& v : *e) m = std::max(m, abs_of(v));
    } else {
        for (const auto& v : std::get<FloatData>(data_)) m = std::max(m, abs_of(v));
    }
    return m;
}

double Matrix::max_abs_diff(const Matrix& o) const {
    require_same_backend(*this, o, "max_abs_diff");
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DimensionError("shape mismatch: " + dim_str(*this) + " vs " + dim_str(o));
    double m = 0.0;
    if (backend() == Backend::exact) {
        const auto& x = cells<ExactComplex>();
        const auto& y = o.cells<ExactComplex>();
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, abs_of(x[i] - y[i]));
    } else {
        const auto& x = cells<FloatComplex>();
        const auto& y = o.cells<FloatComplex>();
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, abs_of(x[i] - y[i]));
    }
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_backend(a, b, "matrix addition");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw DimensionError("shape mismatch: " + dim_str(a) + " + " + dim_str(b));
    Matrix out = a;
    if (a.backend() == Backend::exact) {
        auto& x = out.cells<ExactComplex>();
        const auto& y = b.cells<ExactComplex>();
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] + y[i];
    } else {
        auto& x = out.cells<FloatComplex>();
        const auto& y = b.cells<FloatComplex>();
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] + y[i];
    }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_backend(a, b, "matrix subtraction");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw DimensionError("shape mismatch: " + dim_str(a) + " - " + dim_str(b));
    Matrix out = a;
    if (a.backend() == Backend::exact) {
        auto& x = out.cells<ExactComplex>();
        const auto& y = b.cells<ExactComplex>();
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] - y[i];
    } else {
        auto& x = out.cells<FloatComplex>();
        const auto& y = b.cells<FloatComplex>();
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] - y[i];
    }
    return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
    require_same_backend(a, b, "matrix comparison");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    return a.data_ == b.data_;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    require_same_backend(a, b, "mat_mul");
    if (a.cols_ != b.rows_)
        throw DimensionError("dimension mismatch in mat_mul: " + dim_str(a) + " * " + dim_str(b));
    if (a.backend() == Backend::exact)
        return Matrix(a.rows_, b.cols_,
                      mul_cells(a.cells<ExactComplex>(), b.cells<ExactComplex>(), a.rows_, a.cols_,
                                b.cols_));
    return Matrix(a.rows_, b.cols_,
                  mul_cells(a.cells<FloatComplex>(), b.cells<FloatComplex>(), a.rows_, a.cols_,
                            b.cols_));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    require_same_backend(a, b, "kron");
    if (a.backend() == Backend::exact)
        return Matrix(a.rows_ * b.rows_, a.cols_ * b.cols_,
                      kron_cells(a.cells<ExactComplex>(), a.rows_, a.cols_, b.cells<ExactComplex>(),
                                 b.rows_, b.cols_));
    return Matrix(a.rows_ * b.rows_, a.cols_ * b.cols_,
                  kron_cells(a.cells<FloatComplex>(), a.rows_, a.cols_, b.cells<FloatComplex>(),
                             b.rows_, b.cols_));
}

Scalar norm_sq(const Matrix& row) {
    if (!row.is_row()) throw DimensionError("norm is defined for 1xn row vectors");
    if (row.backend() == Backend::exact) {
        Rational acc(0);
        for (const auto& v : row.cells<ExactComplex>()) acc += v.norm_sq();
        return Scalar::exact(acc);
    }
    double acc = 0.0;
    for (const auto& v : row.cells<FloatComplex>()) acc += std::norm(v);
    return Scalar::floating(acc);
}

Scalar row_norm(const Matrix& row) {
    Scalar sq = norm_sq(row);
    if (row.backend() == Backend::floating)
        return Scalar::floating(std::sqrt(sq.float_value().real()));
    const Rational& q = sq.exact_value().re;
    mpz_class num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        Rational r(rn, rd);
        r.canonicalize();
        return Scalar::exact(r);
    }
    throw Error("exact norm is irrational; use norm_sq on the exact backend");
}

bool is_unitary(const Matrix& m, double tol) {
    if (!m.is_square()) throw DimensionError("is_unitary requires a square matrix");
    Matrix prod = mat_mul(m, conj_transpose(m));
    Matrix id = Matrix::identity(m.backend(), m.rows());
    if (m.backend() == Backend::exact) return prod == id;
    return prod.max_abs_diff(id) <= tol;
}

}  // namespace qfa
