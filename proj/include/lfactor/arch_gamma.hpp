#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lfactor/numerics.hpp"

namespace lfactor {

class ArchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when s is within kPoleDistance of a pole of a Gamma factor.
class ArchPoleError : public ArchError {
 public:
  using ArchError::ArchError;
};

inline constexpr double kPoleDistance = 1e-8;

enum class Place { real, complex };

/// Unitary character of R^x (x -> sgn(x)^eps |x|^{it}) or of C^x
/// (z -> (z/|z|)^n |z|_C^{it}, n = eps, |z|_C = |z|^2).
struct ArchChar {
  Place place = Place::real;
  int eps = 0;
  double t = 0.0;

  ArchChar inverse() const;
};

/// Gamma function on the complex plane (Lanczos, g = 7).
Scalar complex_gamma(Scalar z);
/// pi^{-s/2} Gamma(s/2)
Scalar gamma_r(Scalar s);
/// 2 (2 pi)^{-s} Gamma(s)
Scalar gamma_c(Scalar s);

Scalar arch_l_factor(const ArchChar& chi, Scalar s);
/// epsilon(s, chi, psi): i^eps (real), i^|n| (complex); conjugated for psi^{-1}.
Scalar arch_epsilon(const ArchChar& chi, bool inverse_psi = false);
/// epsilon L(1 - s, chi^{-1}) / L(s, chi) with psi(x) = e^{2 pi i x} on R,
/// e^{2 pi i 2 Re z} on C (or their inverses).
Scalar arch_gamma(const ArchChar& chi, Scalar s, bool inverse_psi = false);

/// Polynomial times Gaussian: sum c_{a,b} x^a e^{-pi x^2} on R (b = 0), or
/// sum c_{a,b} z^a zbar^b e^{-2 pi |z|^2} on C.
struct ArchSeed {
  Place place = Place::real;
  std::map<std::pair<int, int>, Scalar> terms;

  static ArchSeed gaussian(Place place);
  static ArchSeed hermite(int k);                // x^k e^{-pi x^2}
  static ArchSeed complex_monomial(int a, int b);  // z^a zbar^b e^{-2 pi |z|^2}

  Scalar eval(double x) const;
  Scalar eval(Scalar z) const;
};

/// F_psi f(y) = int f(x) psi(x y) dx, self-dual measures; exact on the seed family.
ArchSeed arch_fourier(const ArchSeed& f, bool inverse_psi = false);

/// Z(s, phi, chi) for phi = |x|^{1/2} f: int f(x) chi(x) |x|^s d^x x by
/// tanh-sinh and Gauss-Kronrod quadrature (radial) and an equispaced rule (angular, exact for the family).
Scalar arch_zeta(const ArchSeed& f, const ArchChar& chi, Scalar s);

struct ArchFeSample {
  Scalar s;
  Scalar lhs;  // Z(1 - s, F phi, chi^{-1})
  Scalar rhs;  // gamma(s, chi, psi) Z(s, phi, chi)
  double diff = 0.0;
};

struct ArchFeReport {
  std::vector<ArchFeSample> samples;
  double max_diff = 0.0;
};

ArchFeReport arch_fe_check(const ArchSeed& f, const ArchChar& chi, const std::vector<Scalar>& s_samples);

}  // namespace lfactor
