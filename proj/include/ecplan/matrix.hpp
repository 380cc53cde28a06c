#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace ecplan {

// Dense row-major matrix of per-period, per-member energies (kWh).
// Rows index time periods, columns index community members.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m;
        m.rows_ = rows.size();
        m.cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
        m.data_.reserve(m.rows_ * m.cols_);
        for (const auto& row : rows) {
            if (row.size() != m.cols_)
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            m.data_.insert(m.data_.end(), row.begin(), row.end());
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    double at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw std::out_of_range("Matrix::at: index out of range");
        return data_[r * cols_ + c];
    }

    double row_sum(std::size_t r) const {
        double s = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
        return s;
    }

    double col_sum(std::size_t c) const {
        double s = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c);
        return s;
    }

    double total() const {
        double s = 0.0;
        for (double v : data_) s += v;
        return s;
    }

    double min_value() const {
        double m = data_.empty() ? 0.0 : data_.front();
        for (double v : data_) m = std::min(m, v);
        return m;
    }

    const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(what) + ": matrix dimensions disagree");
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (std::abs(a(r, c) - b(r, c)) > tol) return false;
    return true;
}

}  // namespace ecplan
