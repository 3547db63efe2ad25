#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>

#include "selfsim/errors.hpp"

namespace selfsim {

/// Maximum state dimension supported by the fixed-capacity kernels.
inline constexpr int kMaxDim = 8;

/// Small dense vector with runtime dimension (<= kMaxDim).  Value semantics,
/// no heap allocation; this is the state type threaded through every module.
class Vec {
public:
    Vec() = default;

    explicit Vec(int n) : n_(n) {
        check_dim(n);
        e_.fill(0.0);
    }

    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        check_dim(n_);
        std::copy(xs.begin(), xs.end(), e_.begin());
    }

    static Vec zero(int n) { return Vec(n); }

    static Vec unit(int n, int i) {
        Vec v(n);
        v[i] = 1.0;
        return v;
    }

    int dim() const { return n_; }

    double& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }

    const double* data() const { return e_.data(); }
    double* data() { return e_.data(); }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) e_[i] += o.e_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) e_[i] -= o.e_[i];
        return *this;
    }
    Vec& operator*=(double a) {
        for (int i = 0; i < n_; ++i) e_[i] *= a;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double a, Vec v) { return v *= a; }
    friend Vec operator*(Vec v, double a) { return v *= a; }
    friend Vec operator-(Vec v) { return v *= -1.0; }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += e_[i] * o.e_[i];
        return s;
    }

    double norm() const { return std::sqrt(dot(*this)); }

    double norm_inf() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s = std::max(s, std::fabs(e_[i]));
        return s;
    }

    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(e_[i])) return false;
        return true;
    }

private:
    static void check_dim(int n) {
        if (n < 0 || n > kMaxDim) raise(Errc::DimensionMismatch, "vector dimension out of range");
    }

    std::array<double, kMaxDim> e_{};
    int n_ = 0;
};

/// Small dense matrix, row-major, runtime dimension (<= kMaxDim square).
class Mat {
public:
    Mat() = default;

    explicit Mat(int n) : n_(n) {
        if (n < 0 || n > kMaxDim) raise(Errc::DimensionMismatch, "matrix dimension out of range");
        e_.fill(0.0);
    }

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diag(const Vec& d) {
        Mat m(d.dim());
        for (int i = 0; i < d.dim(); ++i) m(i, i) = d[i];
        return m;
    }

    int dim() const { return n_; }

    double& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * kMaxDim + j)]; }
    double operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * kMaxDim + j)]; }

    Mat& operator+=(const Mat& o) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) (*this)(i, j) += o(i, j);
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) (*this)(i, j) -= o(i, j);
        return *this;
    }
    Mat& operator*=(double a) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) (*this)(i, j) *= a;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(double a, Mat m) { return m *= a; }

    Vec operator*(const Vec& v) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    Mat operator*(const Mat& o) const {
        Mat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                double s = 0.0;
                for (int k = 0; k < n_; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat transposed() const {
        Mat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    double norm_inf() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            double row = 0.0;
            for (int j = 0; j < n_; ++j) row += std::fabs((*this)(i, j));
            s = std::max(s, row);
        }
        return s;
    }

    bool finite() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (!std::isfinite((*this)(i, j))) return false;
        return true;
    }

    /// Quadratic form x^T (this) y.
    double form(const Vec& x, const Vec& y) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += x[i] * (*this)(i, j) * y[j];
        return s;
    }

private:
    std::array<double, kMaxDim * kMaxDim> e_{};
    int n_ = 0;
};

} // namespace selfsim
