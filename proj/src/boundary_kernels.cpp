#include "hv/boundary_kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>
#include <numbers>
#include <stdexcept>

namespace hv {

using boost::math::quadrature::gauss_kronrod;
using std::numbers::pi;

void check_kernel_params(const KernelParams& p) {
  if (!(p.t > 0.0)) throw std::invalid_argument("kernel: t must be > 0");
  if (p.quadrature_n < 64) throw std::invalid_argument("kernel: quadrature_n must be >= 64");
}

double kernel_g(double t, double x) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel_g: t must be > 0");
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * pi * t);
}

double kernel_G2(double t, double x, double y) { return kernel_g(t, x) * kernel_g(t, y); }

double kernel_g_dn(double t, double x, int n) {
  // d^n/dx^n e^{-u^2} = (-1)^n H_n(u) e^{-u^2}, u = x / (2 sqrt t)
  double c = 1.0 / (2.0 * std::sqrt(t)), u = x * c;
  double h0 = 1.0, h1 = 2.0 * u, hn = n == 0 ? h0 : h1;
  for (int k = 2; k <= n; ++k) {
    hn = 2.0 * u * h1 - 2.0 * (k - 1) * h0;
    h0 = h1;
    h1 = hn;
  }
  double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(c, n) * hn * kernel_g(t, x);
}

double kernel_H(const KernelParams& p, double y, double z) {
  check_kernel_params(p);
  return std::exp(-p.xi * p.xi * p.t) * (kernel_g(p.t, y - z) + kernel_g(p.t, y + z));
}

QuadResult kernel_R_quad(const KernelParams& p, double y, double z) {
  check_kernel_params(p);
  const double a = std::abs(p.xi), Y = y + z;
  if (a == 0.0) return {0.0, 0.0};
  if (Y <= 1e-14) return {a * std::erfc(-a * std::sqrt(p.t)), 0.0};
  auto f = [&](double sig) {
    double s = sig * sig;
    if (s == 0.0) return 0.0;
    double e = std::exp(-s * a * a) * kernel_g(s, Y);
    return 2.0 * sig * (-a * a * e + a * (-Y / (2.0 * s)) * e);
  };
  // the integrand peaks near sigma ~ Y / 2; break the interval around it
  const double top = std::sqrt(p.t);
  std::vector<double> br{0.0};
  for (double c : {0.125 * Y, 0.25 * Y, 0.5 * Y, Y, 2.0 * Y, 4.0 * Y})
    if (c > br.back() && c < top) br.push_back(c);
  br.push_back(top);
  double v = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    double e = 0.0;
    v += gauss_kronrod<double, 61>::integrate(f, br[i], br[i + 1], 12, 1e-10, &e);
    err += e;
  }
  QuadResult r{-2.0 * v, 2.0 * err};
  if (!std::isfinite(r.value) || r.error > 1e-13 * a + 1e-8 * std::abs(r.value))
    throw std::runtime_error("kernel_R: s-quadrature did not converge");
  return r;
}

double kernel_R(const KernelParams& p, double y, double z) { return kernel_R_quad(p, y, z).value; }

double kernel_R_closed(double xi, double t, double y, double z) {
  const double a = std::abs(xi), Y = y + z;
  if (a == 0.0) return 0.0;
  return a * std::exp(-a * Y) * std::erfc((Y - 2.0 * a * t) / (2.0 * std::sqrt(t)));
}

double kernel_K(double xi, double t, double y, double z) {
  return std::exp(-xi * xi * t) * (kernel_g(t, y - z) + kernel_g(t, y + z)) + kernel_R_closed(xi, t, y, z);
}

double kernel_R_gamma(double xi, double t, double y, double z) {
  const double a = std::abs(xi), Y = y + z;
  if (a == 0.0) return 0.0;
  // (Xi E)_xi(u) = 2(-xi^2 E + |xi| E'), E = e^{-a|u|}/(2a), E' = -sgn(u) e^{-a|u|}/2
  auto XiE = [a](double u) {
    double e = std::exp(-a * std::abs(u));
    double sg = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    return 2.0 * (-a * a * e / (2.0 * a) - a * sg * e / 2.0);
  };
  auto f = [&](double u) { return XiE(u) * kernel_g(t, Y - u); };
  const double w = 14.0 * std::sqrt(t);
  double err = 0.0, total = 0.0;
  // split at the kink u = 0; the Gaussian confines u to Y +- w
  double lo = Y - w, hi = Y + w;
  if (lo < 0.0) {
    total += gauss_kronrod<double, 61>::integrate(f, lo, std::min(0.0, hi), 20, 1e-14, &err);
    if (hi > 0.0) total += gauss_kronrod<double, 61>::integrate(f, 0.0, hi, 20, 1e-14, &err);
  } else {
    total += gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-14, &err);
  }
  double gamma_t = std::exp(-xi * xi * t) * total;
  double gamma_0 = XiE(Y);
  return gamma_t - gamma_0;
}

}  // namespace hv
