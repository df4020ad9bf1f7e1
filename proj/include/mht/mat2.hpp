#pragma once

// Tiny 2x2 real matrix helper: trace, determinant, eigenvalues, eigenvectors.

#include <array>
#include <cmath>
#include <complex>

namespace mht {

struct Mat2 {
  double a11 = 0, a12 = 0;
  double a21 = 0, a22 = 0;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }

  /// Eigenvalues, possibly a complex pair.
  std::array<std::complex<double>, 2> eigenvalues() const {
    const double tr = trace(), de = det();
    const double disc = tr * tr / 4.0 - de;
    if (disc >= 0) {
      const double rt = std::sqrt(disc);
      return {std::complex<double>(tr / 2.0 - rt, 0.0),
              std::complex<double>(tr / 2.0 + rt, 0.0)};
    }
    const double im = std::sqrt(-disc);
    return {std::complex<double>(tr / 2.0, -im), std::complex<double>(tr / 2.0, im)};
  }

  /// Unit eigenvector for a real eigenvalue lambda.
  std::array<double, 2> eigenvector(double lambda) const {
    // rows of (J - lambda I) are both orthogonal to the eigenvector; use the
    // numerically larger one.
    const double r1x = a11 - lambda, r1y = a12;
    const double r2x = a21, r2y = a22 - lambda;
    double vx, vy;
    if (std::abs(r1x) + std::abs(r1y) >= std::abs(r2x) + std::abs(r2y)) {
      vx = -r1y;
      vy = r1x;
    } else {
      vx = -r2y;
      vy = r2x;
    }
    double nrm = std::hypot(vx, vy);
    if (nrm == 0) return {1.0, 0.0};
    return {vx / nrm, vy / nrm};
  }
};

}  // namespace mht
