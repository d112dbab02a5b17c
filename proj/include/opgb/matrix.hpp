#pragma once

#include "opgb/errors.hpp"
#include "opgb/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace opgb {

/// Dense row-major matrix. Semi-infinite matrices are always handled through
/// finite truncations of this type.
template <Scalar T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw InvalidArgument("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix diagonal(std::span<const T> values) {
        Matrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    /// Upper-left l x l block.
    Matrix leading(std::size_t l) const { return block(0, 0, l, l); }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidArgument("block out of range");
        Matrix out(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw InvalidArgument("matrix product shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend std::vector<T> operator*(const Matrix& a, std::span<const T> v) {
        if (a.cols_ != v.size()) throw InvalidArgument("matrix-vector shape mismatch");
        std::vector<T> out(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <Scalar T>
Matrix<T> matrix_from_rational(const Matrix<Rational>& m) {
    if constexpr (std::is_same_v<T, Rational>) {
        return m;
    } else {
        Matrix<T> out(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = from_rational<T>(m(i, j));
        return out;
    }
}

/// Entrywise comparison honouring the float tolerance.
template <Scalar T>
bool approx_equal(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!ScalarTraits<T>::equal(a(i, j), b(i, j))) return false;
    return true;
}

template <Scalar T>
bool is_symmetric(const Matrix<T>& m) {
    return m.square() && approx_equal(m, m.transpose());
}

template <Scalar T>
T max_abs_entry(const Matrix<T>& m) {
    T best(0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) best = std::max(best, ScalarTraits<T>::abs(m(i, j)));
    return best;
}

template <Scalar T>
bool is_diagonal(const Matrix<T>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && !is_zero(m(i, j))) return false;
    return true;
}

namespace detail {

// Pivot choice: first nonzero in exact mode, largest magnitude in float mode.
template <Scalar T>
std::optional<std::size_t> choose_pivot(const Matrix<T>& a, std::size_t col) {
    std::optional<std::size_t> best;
    for (std::size_t r = col; r < a.rows(); ++r) {
        if (is_zero(a(r, col))) continue;
        if constexpr (ScalarTraits<T>::exact) {
            return r;
        } else {
            if (!best || std::abs(a(r, col)) > std::abs(a(*best, col))) best = r;
        }
    }
    return best;
}

template <Scalar T>
void swap_rows(Matrix<T>& a, std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

}  // namespace detail

/// Solves A X = B by Gaussian elimination with row pivoting. Returns nullopt
/// when A is singular (float mode: pivot below tolerance).
template <Scalar T>
std::optional<Matrix<T>> try_solve(Matrix<T> a, Matrix<T> b) {
    if (!a.square() || a.rows() != b.rows()) throw InvalidArgument("solve shape mismatch");
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        auto pivot = detail::choose_pivot(a, col);
        if (!pivot) return std::nullopt;
        detail::swap_rows(a, col, *pivot);
        detail::swap_rows(b, col, *pivot);
        const T inv = T(1) / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            const T factor = a(r, col) * inv;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) -= factor * b(col, j);
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            T acc = b(i, j);
            for (std::size_t k = i + 1; k < n; ++k) acc -= a(i, k) * b(k, j);
            b(i, j) = acc / a(i, i);
        }
    }
    return b;
}

template <Scalar T>
std::optional<Matrix<T>> try_inverse(const Matrix<T>& a) {
    return try_solve(a, Matrix<T>::identity(a.rows()));
}

template <Scalar T>
std::optional<std::vector<T>> try_solve_vector(const Matrix<T>& a, std::span<const T> rhs) {
    Matrix<T> b(rhs.size(), 1);
    for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
    auto x = try_solve(a, std::move(b));
    if (!x) return std::nullopt;
    std::vector<T> out(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = (*x)(i, 0);
    return out;
}

/// Determinant by elimination; exact in rational mode. det of a 0x0 matrix is 1.
template <Scalar T>
T determinant(Matrix<T> a) {
    if (!a.square()) throw InvalidArgument("determinant of non-square matrix");
    const std::size_t n = a.rows();
    T det(1);
    for (std::size_t col = 0; col < n; ++col) {
        auto pivot = detail::choose_pivot(a, col);
        if (!pivot) return T(0);
        if (*pivot != col) {
            detail::swap_rows(a, col, *pivot);
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            const T factor = a(r, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
        }
    }
    return det;
}

/// Inverse of a unit lower-triangular matrix by forward substitution.
template <Scalar T>
Matrix<T> unit_lower_inverse(const Matrix<T>& l) {
    const std::size_t n = l.rows();
    Matrix<T> inv = Matrix<T>::identity(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) {
            T acc(0);
            for (std::size_t k = j; k < i; ++k) acc += l(i, k) * inv(k, j);
            inv(i, j) = -acc;
        }
    return inv;
}

/// Semi-infinite banded operators acting on the monomial basis, truncated
/// to `size`.
struct BandedOperator {
    enum class Kind { shift, shift_transpose, derivative };
    Kind kind;
    std::size_t size;

    template <Scalar T>
    Matrix<T> to_dense() const {
        Matrix<T> m(size, size);
        for (std::size_t i = 0; i + 1 < size; ++i) {
            switch (kind) {
                case Kind::shift: m(i, i + 1) = T(1); break;
                case Kind::shift_transpose: m(i + 1, i) = T(1); break;
                // D chi(x) = chi'(x): entry (i, i-1) equals i.
                case Kind::derivative: m(i + 1, i) = T(static_cast<long>(i + 1)); break;
            }
        }
        return m;
    }
};

template <Scalar T>
Matrix<T> shift_matrix(std::size_t n) {
    return BandedOperator{BandedOperator::Kind::shift, n}.to_dense<T>();
}

template <Scalar T>
Matrix<T> derivative_matrix(std::size_t n) {
    return BandedOperator{BandedOperator::Kind::derivative, n}.to_dense<T>();
}

}  // namespace opgb
