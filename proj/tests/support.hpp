#pragma once

// Test-side helpers: seeded generators and reference computations that do not
// share code with the library.

#include <cmath>
#include <limits>
#include <numeric>
#include <cstdint>
#include <random>
#include <vector>

#include "lyapoly/family.hpp"
#include "lyapoly/linalg.hpp"
#include "lyapoly/matrix.hpp"

namespace lyapoly::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    Matrix matrix(std::size_t d, double lo = -1.0, double hi = 1.0) {
        Matrix m(d, d);
        for (double& x : m.data()) x = uniform(lo, hi);
        return m;
    }

    // Nonnegative off-diagonal part, arbitrary diagonal.
    Matrix metzler(std::size_t d, double diag_lo = -3.0, double diag_hi = 1.0) {
        Matrix m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m(i, j) = i == j ? uniform(diag_lo, diag_hi) : uniform(0.0, 1.0);
        return m;
    }

    Vector vector(std::size_t d, double lo = -1.0, double hi = 1.0) {
        Vector v(d);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

using LongMatrix = std::vector<std::vector<long double>>;

inline LongMatrix to_long(const Matrix& a) {
    LongMatrix m(a.rows(), std::vector<long double>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
    return m;
}

inline LongMatrix mul(const LongMatrix& a, const LongMatrix& b) {
    const std::size_t n = a.size();
    LongMatrix c(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// Reference exponential: Taylor series in extended precision after scaling
// the argument below 1/2, followed by repeated squaring.
inline Matrix taylor_exp(const Matrix& a, double t) {
    const std::size_t n = a.rows();
    LongMatrix m = to_long(a * t);
    long double norm = 0.0L;
    for (const auto& r : m)
        for (long double x : r) norm += std::fabs(x);
    int s = 0;
    while (norm > 0.5L) {
        norm /= 2.0L;
        ++s;
    }
    for (auto& r : m)
        for (long double& x : r) x = std::ldexp(x, -s);
    LongMatrix sum(n, std::vector<long double>(n, 0.0L));
    LongMatrix term(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) sum[i][i] = term[i][i] = 1.0L;
    for (int k = 1; k <= 40; ++k) {
        term = mul(term, m);
        for (auto& r : term)
            for (long double& x : r) x /= k;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) sum[i][j] += term[i][j];
    }
    for (int k = 0; k < s; ++k) sum = mul(sum, sum);
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = static_cast<double>(sum[i][j]);
    return out;
}

inline double rel_frobenius(const Matrix& a, const Matrix& b) {
    const double denom = std::max(b.norm_frobenius(), 1e-300);
    return (a - b).norm_frobenius() / denom;
}

inline Matrix product_of(const std::vector<Matrix>& factors) {
    Matrix p = Matrix::identity(factors.front().rows());
    for (const Matrix& f : factors) p = p * f;
    return p;
}

inline double determinant(Matrix a) {
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

// True when the rightmost eigenvalue is real (so the one-matrix polytope is a segment).
inline bool real_abscissa(const Matrix& a) {
    const Spectrum s = eig_full(a);
    const double sa = spectral_abscissa(a);
    for (const Complex& l : s.eigenvalues)
        if (std::abs(l.real() - sa) <= 1e-9 && std::abs(l.imag()) > 1e-9) return false;
    return true;
}

// Reference: every word of every length <= l, plain products.
inline double brute_force_best(const std::vector<Matrix>& b, std::size_t l, bool maximise) {
    double best = maximise ? -1.0 : std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= l; ++n) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= b.size();
        for (std::size_t code = 0; code < total; ++code) {
            Matrix p = Matrix::identity(b.front().rows());
            std::size_t c = code;
            for (std::size_t i = 0; i < n; ++i) {
                p = b[c % b.size()] * p;
                c /= b.size();
            }
            const double v = std::pow(spectral_radius(p), 1.0 / static_cast<double>(n));
            best = maximise ? std::max(best, v) : std::min(best, v);
        }
    }
    return best;
}

// Grid oracle for the monotone hull: is there lambda >= 0 with sum <= 1 and
// V lambda >= z componentwise?
inline bool grid_in_monotone(const std::vector<Vector>& v, const Vector& z, int steps) {
    const std::size_t k = v.size();
    std::vector<int> idx(k, 0);
    while (true) {
        const int total = std::accumulate(idx.begin(), idx.end(), 0);
        if (total <= steps) {
            bool ok = true;
            for (std::size_t i = 0; i < z.size() && ok; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < k; ++j) s += v[j][i] * idx[j] / static_cast<double>(steps);
                ok = s >= z[i];
            }
            if (ok) return true;
        }
        std::size_t pos = 0;
        while (pos < k && ++idx[pos] > steps) idx[pos++] = 0;
        if (pos == k) return false;
    }
}

}  // namespace lyapoly::testing
