#include "lyapoly/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lyapoly/error.hpp"

namespace lyapoly {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const Matrix& m, const char* stage) {
    if (!m.is_square() || m.empty()) {
        throw Error(ErrorCode::DimensionMismatch, stage, "expected a non-empty square matrix");
    }
    if (!m.all_finite()) throw Error(ErrorCode::NonFinite, stage, "matrix has a non-finite entry");
}

// Parlett-Reinsch balancing by powers of two; leaves eigenvalues unchanged.
void balance(Matrix& a) {
    const std::size_t n = a.rows();
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

void to_hessenberg(Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    Vector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        double xnorm = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            v[i] = a(k + 1 + i, k);
        }
        xnorm = norm2(std::span<const double>(v.data(), len));
        if (xnorm == 0.0) continue;
        const double alpha = v[0] >= 0.0 ? -xnorm : xnorm;
        v[0] -= alpha;
        const double vnorm = norm2(std::span<const double>(v.data(), len));
        if (vnorm == 0.0) continue;
        for (std::size_t i = 0; i < len; ++i) v[i] /= vnorm;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += v[i] * a(k + 1 + i, j);
            for (std::size_t i = 0; i < len; ++i) a(k + 1 + i, j) -= 2.0 * v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < len; ++j) s += a(i, k + 1 + j) * v[j];
            for (std::size_t j = 0; j < len; ++j) a(i, k + 1 + j) -= 2.0 * s * v[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
ComplexVector hessenberg_qr(Matrix& a, std::size_t max_sweeps) {
    const int n = static_cast<int>(a.rows());
    ComplexVector w(a.rows());
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

    std::size_t sweeps = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l > 0; --l) {
                double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= kEps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = a(nn, nn);
            if (l == nn) {
                w[nn--] = x + t;
            } else {
                double y = a(nn - 1, nn - 1);
                double ww = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    const double p = 0.5 * (y - x);
                    const double q = p * p + ww;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        w[nn - 1] = w[nn] = x + z;
                        if (z != 0.0) w[nn] = x - ww / z;
                    } else {
                        w[nn - 1] = Complex(x + p, z);
                        w[nn] = Complex(x + p, -z);
                    }
                    nn -= 2;
                } else {
                    if (++sweeps > max_sweeps) {
                        throw Error(ErrorCode::NoConvergence, "eig_full",
                                    "QR iteration exceeded " + std::to_string(max_sweeps) + " sweeps");
                    }
                    if (its % 10 == 9) {
                        // exceptional shift
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        double s = y - z;
                        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
                        if (u <= kEps * v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        a(i + 2, i) = 0.0;
                        if (i != m) a(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn) r = a(k + 2, k - 1);
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) a(k, k - 1) = -a(k, k - 1);
                        } else {
                            a(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            p = a(k, j) + q * a(k + 1, j);
                            if (k + 1 != nn) {
                                p += r * a(k + 2, j);
                                a(k + 2, j) -= p * z;
                            }
                            a(k + 1, j) -= p * y;
                            a(k, j) -= p * x;
                        }
                        const int mmin = nn < k + 3 ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            p = x * a(i, k) + y * a(i, k + 1);
                            if (k + 1 != nn) {
                                p += z * a(i, k + 2);
                                a(i, k + 2) -= p * r;
                            }
                            a(i, k + 1) -= p * q;
                            a(i, k) -= p;
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

std::size_t pick_leading(const ComplexVector& ev) {
    double top = 0.0;
    for (const Complex& z : ev) top = std::max(top, std::abs(z));
    const double tol = kTolEig * std::max(top, 1.0);
    std::size_t best = ev.size();
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) < top - tol) continue;
        if (best == ev.size() || ev[i].real() > ev[best].real() + tol) best = i;
    }
    return best;
}

using ComplexMatrix = std::vector<ComplexVector>;

ComplexMatrix shifted(const Matrix& m, Complex lambda) {
    const std::size_t n = m.rows();
    ComplexMatrix c(n, ComplexVector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[i][j] = m(i, j) - (i == j ? lambda : Complex(0.0));
    return c;
}

// Null vector of c by Gaussian elimination with complete pivoting. Free
// variables are the columns left without a pivot; the lowest-index one is set
// to one and the others to zero.
ComplexVector null_vector(ComplexMatrix c) {
    const std::size_t n = c.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double cmax = 0.0;
    for (const auto& row : c)
        for (const Complex& z : row) cmax = std::max(cmax, std::abs(z));
    const double thresh = 1e-8 * std::max(cmax, std::numeric_limits<double>::min());

    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double best = -1.0;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                const double v = std::abs(c[i][perm[j]]);
                if (v > best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best <= thresh) break;
        std::swap(c[k], c[bi]);
        std::swap(perm[k], perm[bj]);
        const Complex piv = c[k][perm[k]];
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = c[i][perm[k]] / piv;
            if (f == Complex(0.0)) continue;
            for (std::size_t j = k; j < n; ++j) c[i][perm[j]] -= f * c[k][perm[j]];
        }
        rank = k + 1;
    }
    if (rank == n) rank = n - 1;

    std::size_t free_pos = rank;
    for (std::size_t j = rank; j < n; ++j)
        if (perm[j] < perm[free_pos]) free_pos = j;

    ComplexVector x(n, Complex(0.0));
    x[perm[free_pos]] = 1.0;
    for (std::size_t k = rank; k-- > 0;) {
        Complex s = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) s += c[k][perm[j]] * x[perm[j]];
        x[perm[k]] = -s / c[k][perm[k]];
    }
    return x;
}

// One step of inverse iteration: solves c y = x with partial pivoting, tiny
// pivots being replaced so that an exactly singular shift still works.
ComplexVector inverse_step(ComplexMatrix c, ComplexVector x, double scale) {
    const std::size_t n = c.size();
    const double floor = kEps * std::max(scale, std::numeric_limits<double>::min());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(c[i][k]) > std::abs(c[p][k])) p = i;
        std::swap(c[k], c[p]);
        std::swap(x[k], x[p]);
        if (std::abs(c[k][k]) < floor) c[k][k] = floor;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = c[i][k] / c[k][k];
            if (f == Complex(0.0)) continue;
            for (std::size_t j = k; j < n; ++j) c[i][j] -= f * c[k][j];
            x[i] -= f * x[k];
        }
    }
    ComplexVector y(n);
    for (std::size_t k = n; k-- > 0;) {
        Complex s = x[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= c[k][j] * y[j];
        y[k] = s / c[k][k];
    }
    return y;
}

std::size_t largest_component(const ComplexVector& x) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) > std::abs(x[k]) * (1.0 + 1e-12)) k = i;
    return k;
}

void normalise_phase(ComplexVector& x) {
    double s = 0.0;
    for (const Complex& z : x) s += std::norm(z);
    s = std::sqrt(s);
    if (s == 0.0 || !std::isfinite(s)) return;
    const std::size_t k = largest_component(x);
    const Complex rot = std::conj(x[k]) / std::abs(x[k]) / s;
    for (Complex& z : x) z *= rot;
    x[k] = Complex(x[k].real(), 0.0);
}

// Pade(13) coefficients from Higham's scaling and squaring method.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

Matrix solve(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.rows();
    if (!a.is_square() || b.rows() != n) {
        throw Error(ErrorCode::DimensionMismatch, "solve", "incompatible shapes");
    }
    Matrix lu = a;
    Matrix x = b;
    const std::size_t m = b.cols();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
        if (lu(p, k) == 0.0) throw Error(ErrorCode::InvalidArgument, "solve", "matrix is singular");
        if (p != k) {
            std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(p).begin());
            std::swap_ranges(x.row(k).begin(), x.row(k).end(), x.row(p).begin());
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = x(k, j);
            for (std::size_t i = k + 1; i < n; ++i) s -= lu(k, i) * x(i, j);
            x(k, j) = s / lu(k, k);
        }
    }
    return x;
}

Matrix mat_exp(const Matrix& a, double t) {
    require_square(a, "mat_exp");
    if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "mat_exp", "non-finite time");
    const std::size_t n = a.rows();
    Matrix m = a * t;
    const double norm = m.norm_one();
    if (!std::isfinite(norm)) throw Error(ErrorCode::Overflow, "mat_exp", "t*A is not representable");

    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
        m *= std::ldexp(1.0, -squarings);
    }

    const auto& b = kPade13;
    const Matrix id = Matrix::identity(n);
    const Matrix a2 = m * m;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = m * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
                          b[1] * id);
    const Matrix v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    Matrix r = solve(v - u, v + u);
    for (int k = 0; k < squarings; ++k) {
        r = r * r;
        if (!r.all_finite()) break;
    }
    if (!r.all_finite()) {
        throw Error(ErrorCode::Overflow, "mat_exp", "matrix exponential overflows double precision");
    }
    return r;
}

Spectrum eig_full(const Matrix& m, std::size_t max_sweeps_per_dim) {
    require_square(m, "eig_full");
    Spectrum out;
    if (m.rows() == 1) {
        out.eigenvalues = {Complex(m(0, 0), 0.0)};
        return out;
    }
    Matrix h = m;
    balance(h);
    to_hessenberg(h);
    out.eigenvalues = hessenberg_qr(h, max_sweeps_per_dim * m.rows());
    out.leading_index = pick_leading(out.eigenvalues);
    return out;
}

double spectral_radius(const Matrix& m) { return std::abs(eig_full(m).leading()); }

double spectral_abscissa(const Matrix& a) {
    const Spectrum s = eig_full(a);
    double best = -std::numeric_limits<double>::infinity();
    for (const Complex& z : s.eigenvalues) best = std::max(best, z.real());
    return best;
}

ComplexVector eigenvector(const Matrix& m, Complex lambda) {
    require_square(m, "eigenvector");
    const ComplexMatrix c = shifted(m, lambda);
    ComplexVector x = null_vector(c);
    normalise_phase(x);
    const double scale = std::max(m.max_abs(), std::abs(lambda));
    ComplexVector y = inverse_step(c, x, scale);
    bool finite = true;
    for (const Complex& z : y) finite = finite && std::isfinite(z.real()) && std::isfinite(z.imag());
    if (finite) {
        normalise_phase(y);
        x = std::move(y);
    }
    return x;
}

Vector real_leading_vector(const Matrix& m) {
    const Spectrum s = eig_full(m);
    Complex lambda = s.leading();
    const bool real = std::abs(lambda.imag()) <= kTolEig * std::max(1.0, std::abs(lambda));
    if (real) lambda = Complex(lambda.real(), 0.0);
    const ComplexVector v = eigenvector(m, lambda);
    Vector x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x[i] = real ? v[i].real() : 2.0 * v[i].real();
    const double nrm = norm2(x);
    if (nrm == 0.0) throw Error(ErrorCode::NoConvergence, "real_leading_vector", "zero eigenvector");
    std::size_t k = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) > std::abs(x[k]) * (1.0 + 1e-12)) k = i;
    const double sgn = x[k] < 0.0 ? -1.0 : 1.0;
    for (double& xi : x) xi *= sgn / nrm;
    return x;
}

bool is_metzler(const Matrix& a, double tol) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j && a(i, j) < -tol) return false;
    return true;
}

bool positive_irreducible(const MatrixFamily& family, double tol_zero) {
    const std::size_t n = family.dim();
    if (n <= 1) return true;
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const Matrix& a : family)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && std::abs(a(j, i)) > tol_zero) adj[i][j] = 1;

    auto reaches_all = [n](auto edge) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (!seen[v] && edge(u, v)) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
        }
        return count == n;
    };
    return reaches_all([&](std::size_t u, std::size_t v) { return adj[u][v] != 0; }) &&
           reaches_all([&](std::size_t u, std::size_t v) { return adj[v][u] != 0; });
}

std::size_t orbit_span_dimension(const MatrixFamily& family, std::span<const double> x, double tol_rank) {
    const std::size_t n = family.dim();
    if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "orbit_span_dimension", "vector length");
    std::vector<Vector> basis;

    // Adds y to the orthonormal basis when it is independent; returns the new
    // basis vector or an empty vector.
    auto absorb = [&](Vector y, double reference) -> Vector {
        if (reference == 0.0) return {};
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& q : basis) y = axpy(-dot(q, y), q, y);
        const double r = norm2(y);
        if (r <= tol_rank * reference) return {};
        for (double& v : y) v /= r;
        basis.push_back(y);
        return y;
    };

    std::vector<Vector> frontier;
    if (Vector q = absorb(Vector(x.begin(), x.end()), norm2(x)); !q.empty()) frontier.push_back(q);
    for (std::size_t step = 1; step < n && !frontier.empty() && basis.size() < n; ++step) {
        std::vector<Vector> next;
        for (const Vector& q : frontier)
            for (const Matrix& a : family) {
                Vector y = a * q;
                const double ref = std::max(norm2(y), norm2_upper(a));
                if (Vector nq = absorb(std::move(y), ref); !nq.empty()) next.push_back(std::move(nq));
            }
        frontier = std::move(next);
    }
    return basis.size();
}

double norm2_upper(const Matrix& m) noexcept {
    return std::min(m.norm_frobenius(), std::sqrt(m.norm_one() * m.norm_inf()));
}

double norm2_power(const Matrix& m, int iterations, double tol) {
    const std::size_t n = m.cols();
    if (n == 0) return 0.0;
    Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const Matrix mt = m.transpose();
    double sigma2 = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vector y = mt * (m * x);
        const double r = norm2(y);
        if (r == 0.0) return 0.0;
        for (double& v : y) v /= r;
        x = std::move(y);
        const bool converged = std::abs(r - sigma2) <= tol * r;
        sigma2 = r;
        if (converged) break;
    }
    return std::sqrt(sigma2);
}

ScaledMatrix ScaledMatrix::from(const Matrix& a) {
    ScaledMatrix s{a, 0.0};
    const double mx = a.max_abs();
    if (mx > 0.0) {
        s.m *= 1.0 / mx;
        s.log_scale = std::log(mx);
    }
    return s;
}

ScaledMatrix ScaledMatrix::premultiplied(const ScaledMatrix& left) const {
    ScaledMatrix out{left.m * m, left.log_scale + log_scale};
    const double mx = out.m.max_abs();
    if (mx == 0.0) {
        out.log_scale = -std::numeric_limits<double>::infinity();
    } else {
        out.m *= 1.0 / mx;
        out.log_scale += std::log(mx);
    }
    return out;
}

ScaledMatrix ScaledMatrix::premultiplied(const Matrix& left) const {
    return premultiplied(ScaledMatrix{left, 0.0});
}

double ScaledMatrix::log_spectral_radius() const {
    const double r = spectral_radius(m);
    if (r == 0.0) return -std::numeric_limits<double>::infinity();
    return log_scale + std::log(r);
}

}  // namespace lyapoly
