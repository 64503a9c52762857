#include "lfactor/arch_gamma.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace lfactor {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
const Scalar kI(0.0, 1.0);

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

int real_eps(int e) { return ((e % 2) + 2) % 2; }

// Distance from u to the poles of Gamma(u / step) scaled back, i.e. to {0, -step, -2 step, ...}.
double pole_distance(Scalar u, double step) {
  double k = std::round(-u.real() / step);
  if (k < 0) k = 0;
  return std::abs(u + k * step);
}

Scalar ipow(Scalar base, int k) {
  Scalar r = 1.0;
  for (int i = 0; i < std::abs(k); ++i) r *= base;
  return k < 0 ? 1.0 / r : r;
}

using Poly2 = std::map<std::pair<int, int>, Scalar>;

void accumulate(Poly2& p, std::pair<int, int> key, Scalar c) {
  if (c == Scalar(0.0)) return;
  p[key] += c;
}

// Real place: d/dy (P e^{-pi y^2}) = (P' - 2 pi y P) e^{-pi y^2}.
Poly2 d_real(const Poly2& p) {
  Poly2 out;
  for (const auto& [k, c] : p) {
    if (k.first > 0) accumulate(out, {k.first - 1, 0}, c * static_cast<double>(k.first));
    accumulate(out, {k.first + 1, 0}, -2.0 * kPi * c);
  }
  return out;
}

// Complex place, with G = e^{-2 pi w wbar}: d/dw (P G) = (d_w P - 2 pi wbar P) G.
Poly2 d_w(const Poly2& p) {
  Poly2 out;
  for (const auto& [k, c] : p) {
    if (k.first > 0) accumulate(out, {k.first - 1, k.second}, c * static_cast<double>(k.first));
    accumulate(out, {k.first, k.second + 1}, -2.0 * kPi * c);
  }
  return out;
}

Poly2 d_wbar(const Poly2& p) {
  Poly2 out;
  for (const auto& [k, c] : p) {
    if (k.second > 0) accumulate(out, {k.first, k.second - 1}, c * static_cast<double>(k.second));
    accumulate(out, {k.first + 1, k.second}, -2.0 * kPi * c);
  }
  return out;
}

// int_0^inf g(r) dr for g with an integrable singularity at 0 and Gaussian
// decay: tanh-sinh on [0, 1], Gauss-Kronrod on [1, kCutoff]; the range beyond kCutoff contributes below e^{-pi kCutoff^2}.
constexpr double kCutoff = 12.0;

Scalar half_line(const std::function<Scalar(double)>& g) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto part = [&](bool singular, bool im) {
    auto h = [&](double r) {
      const Scalar v = g(r);
      return im ? v.imag() : v.real();
    };
    double res;
    try {
      res = singular ? ts.integrate(h, 0.0, 1.0, 1e-13)
                     : boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, 1.0, kCutoff, 15, 1e-13);
    } catch (const std::exception& e) {
      throw ArchError(std::string("arch_zeta: quadrature failure: ") + e.what());
    }
    if (!std::isfinite(res)) throw ArchError("arch_zeta: quadrature failure");
    return res;
  };
  return {part(true, false) + part(false, false), part(true, true) + part(false, true)};
}

}  // namespace

ArchChar ArchChar::inverse() const { return {place, place == Place::real ? real_eps(eps) : -eps, -t}; }

Scalar complex_gamma(Scalar z) {
  if (z.real() < 0.5) {
    const Scalar s = std::sin(kPi * z);
    if (std::abs(s) == 0.0) throw ArchPoleError("complex_gamma: pole");
    return kPi / (s * complex_gamma(1.0 - z));
  }
  z -= 1.0;
  Scalar x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Scalar t = z + 7.5;
  return std::exp(0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x));
}

Scalar gamma_r(Scalar s) { return std::pow(kPi, -s / 2.0) * complex_gamma(s / 2.0); }

Scalar gamma_c(Scalar s) { return 2.0 * std::pow(2.0 * kPi, -s) * complex_gamma(s); }

Scalar arch_l_factor(const ArchChar& chi, Scalar s) {
  if (chi.place == Place::real) {
    const Scalar u = s + kI * chi.t + static_cast<double>(real_eps(chi.eps));
    if (pole_distance(u, 2.0) < kPoleDistance) throw ArchPoleError("arch_l_factor: s is at a pole");
    return gamma_r(u);
  }
  const Scalar u = s + kI * chi.t + std::abs(chi.eps) / 2.0;
  if (pole_distance(u, 1.0) < kPoleDistance) throw ArchPoleError("arch_l_factor: s is at a pole");
  return gamma_c(u);
}

Scalar arch_epsilon(const ArchChar& chi, bool inverse_psi) {
  const int k = chi.place == Place::real ? real_eps(chi.eps) : std::abs(chi.eps);
  return ipow(inverse_psi ? -kI : kI, k);
}

Scalar arch_gamma(const ArchChar& chi, Scalar s, bool inverse_psi) {
  return arch_epsilon(chi, inverse_psi) * arch_l_factor(chi.inverse(), 1.0 - s) / arch_l_factor(chi, s);
}

ArchSeed ArchSeed::gaussian(Place place) {
  ArchSeed f;
  f.place = place;
  f.terms[{0, 0}] = 1.0;
  return f;
}

ArchSeed ArchSeed::hermite(int k) {
  if (k < 0) throw ArchError("ArchSeed: negative degree");
  ArchSeed f;
  f.terms[{k, 0}] = 1.0;
  return f;
}

ArchSeed ArchSeed::complex_monomial(int a, int b) {
  if (a < 0 || b < 0) throw ArchError("ArchSeed: negative degree");
  ArchSeed f;
  f.place = Place::complex;
  f.terms[{a, b}] = 1.0;
  return f;
}

Scalar ArchSeed::eval(double x) const {
  if (place != Place::real) return eval(Scalar(x, 0.0));
  Scalar v = 0.0;
  for (const auto& [k, c] : terms) v += c * std::pow(x, k.first);
  return v * std::exp(-kPi * x * x);
}

Scalar ArchSeed::eval(Scalar z) const {
  if (place == Place::real) {
    if (z.imag() != 0.0) throw ArchError("ArchSeed: real seed evaluated off the real line");
    return eval(z.real());
  }
  Scalar v = 0.0;
  for (const auto& [k, c] : terms) v += c * ipow(z, k.first) * ipow(std::conj(z), k.second);
  return v * std::exp(-2.0 * kPi * std::norm(z));
}

ArchSeed arch_fourier(const ArchSeed& f, bool inverse_psi) {
  const Scalar unit = (inverse_psi ? -1.0 : 1.0) * 2.0 * kPi * kI;
  ArchSeed out;
  out.place = f.place;
  for (const auto& [k, c] : f.terms) {
    Poly2 p{{{0, 0}, 1.0}};
    if (f.place == Place::real) {
      if (k.second != 0) throw ArchError("arch_fourier: real seed with a conjugate exponent");
      for (int i = 0; i < k.first; ++i) p = d_real(p);
    } else {
      for (int i = 0; i < k.second; ++i) p = d_wbar(p);
      for (int i = 0; i < k.first; ++i) p = d_w(p);
    }
    const Scalar scale = c * ipow(unit, -(k.first + k.second));
    for (const auto& [kk, cc] : p) accumulate(out.terms, kk, scale * cc);
  }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = std::abs(it->second) == 0.0 ? out.terms.erase(it) : std::next(it);
  return out;
}

Scalar arch_zeta(const ArchSeed& f, const ArchChar& chi, Scalar s) {
  if (f.place != chi.place) throw ArchError("arch_zeta: seed and character live on different places");
  const Scalar w = s + kI * chi.t;
  if (f.place == Place::real) {
    const int e = real_eps(chi.eps);
    // Only monomials x^j with j + eps even survive the symmetrization.
    for (const auto& [k, c] : f.terms)
      if ((k.first + e) % 2 == 0 && w.real() + k.first <= 0.0)
        throw ArchError("arch_zeta: s outside the region of convergence");
    // f(x) + sgn^e f(-x) keeps 2 c x^k for k + e even; each power of x is
    // combined with x^{w - 1} before evaluation so nothing overflows near 0.
    std::vector<std::pair<int, Scalar>> even;
    for (const auto& [k, c] : f.terms)
      if ((k.first + e) % 2 == 0) even.emplace_back(k.first, 2.0 * c);
    return half_line([&](double x) {
      if (x == 0.0) return Scalar(0.0);
      Scalar v = 0.0;
      for (const auto& [k, c] : even) v += c * std::pow(x, w + (k - 1.0));
      return v * std::exp(-kPi * x * x);
    });
  }
  // Complex place: d^x z = 2 r dr dtheta / r^2 and |z|_C^s = r^{2s}.
  int degree = 0;
  for (const auto& [k, c] : f.terms) {
    degree = std::max(degree, k.first + k.second);
    if (k.first - k.second + chi.eps == 0 && 2.0 * w.real() + k.first + k.second <= 0.0)
      throw ArchError("arch_zeta: s outside the region of convergence");
  }
  // Angular integral of each monomial on the unit circle; it multiplies r^{a + b}.
  const int nodes = 2 * (degree + std::abs(chi.eps)) + 8;
  std::map<int, Scalar> radial;
  for (const auto& [k, c] : f.terms) {
    Scalar ang = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double th = 2.0 * kPi * j / nodes;
      ang += std::exp(kI * (static_cast<double>(k.first - k.second + chi.eps) * th));
    }
    ang *= 2.0 * kPi / nodes;
    if (std::abs(ang) > 1e-12) radial[k.first + k.second] += c * ang;
  }
  return half_line([&](double r) {
    if (r == 0.0) return Scalar(0.0);
    Scalar v = 0.0;
    for (const auto& [d, c] : radial) v += c * std::pow(r, 2.0 * w + (d - 1.0));
    return 2.0 * v * std::exp(-2.0 * kPi * r * r);
  });
}

ArchFeReport arch_fe_check(const ArchSeed& f, const ArchChar& chi, const std::vector<Scalar>& s_samples) {
  const ArchSeed fhat = arch_fourier(f);
  const ArchChar inv = chi.inverse();
  ArchFeReport rep;
  for (const auto& s : s_samples) {
    ArchFeSample x{s, arch_zeta(fhat, inv, 1.0 - s), arch_gamma(chi, s) * arch_zeta(f, chi, s), 0.0};
    x.diff = std::abs(x.lhs - x.rhs);
    rep.max_diff = std::max(rep.max_diff, x.diff);
    rep.samples.push_back(x);
  }
  return rep;
}

}  // namespace lfactor
