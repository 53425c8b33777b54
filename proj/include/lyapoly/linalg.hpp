#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lyapoly/family.hpp"
#include "lyapoly/matrix.hpp"

namespace lyapoly {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Eigenvalues of a real square matrix together with the index of the
/// leading one (maximal modulus; ties go to the largest real part, then to
/// the lowest index).
struct Spectrum {
    ComplexVector eigenvalues;
    std::size_t leading_index = 0;

    [[nodiscard]] Complex leading() const { return eigenvalues.at(leading_index); }
};

inline constexpr double kTolEig = 1e-12;
inline constexpr double kTolZero = 1e-12;
inline constexpr double kTolRank = 1e-10;

/// e^{tA} by scaling and squaring around a degree-13 Pade approximant.
Matrix mat_exp(const Matrix& a, double t = 1.0);

/// All eigenvalues via balancing, Householder reduction to Hessenberg form
/// and Francis double-shift QR. Throws NoConvergence after
/// `max_sweeps_per_dim * d` QR sweeps.
Spectrum eig_full(const Matrix& m, std::size_t max_sweeps_per_dim = 100);

double spectral_radius(const Matrix& m);
double spectral_abscissa(const Matrix& a);

/// Eigenvector of `m` for `lambda`, taken from the null space of m - lambda*I
/// (lowest-index free variable set to one) and polished by inverse
/// iteration. Unit Euclidean norm, phase fixed so that the
/// largest-magnitude component is real and positive.
ComplexVector eigenvector(const Matrix& m, Complex lambda);

/// Real vector carried by the leading eigenvalue: the eigenvector itself when
/// the eigenvalue is real, 2*Re(v) when it is complex. Unit norm; the
/// largest-magnitude component is positive.
Vector real_leading_vector(const Matrix& m);

bool is_metzler(const Matrix& a, double tol = 0.0);

/// Strong connectivity of the union digraph (edge i -> j iff some member has
/// a nonzero (j, i) entry).
bool positive_irreducible(const MatrixFamily& family, double tol_zero = kTolZero);

/// Dimension of span{ P x : P a product of length <= d-1 }.
std::size_t orbit_span_dimension(const MatrixFamily& family, std::span<const double> x,
                                  double tol_rank = kTolRank);

/// Certified upper bound on the spectral norm: min(Frobenius, sqrt(|.|_1 |.|_inf)).
double norm2_upper(const Matrix& m) noexcept;

/// Spectral norm estimate by power iteration on M^T M.
double norm2_power(const Matrix& m, int iterations = 50, double tol = 1e-10);

/// Matrix stored as exp(log_scale) * m, so that long products neither
/// overflow nor underflow.
struct ScaledMatrix {
    Matrix m;
    double log_scale = 0.0;

    static ScaledMatrix from(const Matrix& a);
    /// Returns left * this, renormalised.
    [[nodiscard]] ScaledMatrix premultiplied(const ScaledMatrix& left) const;
    [[nodiscard]] ScaledMatrix premultiplied(const Matrix& left) const;
    [[nodiscard]] double log_spectral_radius() const;
};

/// Solve A X = B with partial pivoting. Throws on a singular A.
Matrix solve(const Matrix& a, const Matrix& b);

}  // namespace lyapoly
