#pragma once

#include <string>

namespace hv {

struct KernelParams {
  double xi = 0.0;
  double t = 0.01;
  int quadrature_n = 64;
};
// Throws std::invalid_argument when t <= 0 or quadrature_n < 64.
void check_kernel_params(const KernelParams& p);

// g(t, x) = (4 pi t)^{-1/2} exp(-x^2 / 4t), G(t, x, y) = g(t, x) g(t, y)
double kernel_g(double t, double x);
double kernel_G2(double t, double x, double y);
// d^n/dx^n g(t, x) through Hermite polynomials.
double kernel_g_dn(double t, double x, int n);

// H_xi(t, y, z) = e^{-xi^2 t} (g(t, y - z) + g(t, y + z))
double kernel_H(const KernelParams& p, double y, double z);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// R_xi(t, y, z) = -2 int_0^t (-xi^2 + |xi| d_y)(e^{-s xi^2} g(s, y + z)) ds with
// s = sigma^2 and adaptive Gauss-Kronrod in sigma. At y + z = 0 the one-sided
// limit |xi| erfc(-|xi| sqrt(t)) is returned. Throws on non-convergence.
QuadResult kernel_R_quad(const KernelParams& p, double y, double z);
double kernel_R(const KernelParams& p, double y, double z);

// Closed form of the same integral: |xi| e^{-|xi| Y} erfc((Y - 2 |xi| t) / (2 sqrt t)), Y = y + z.
double kernel_R_closed(double xi, double t, double y, double z);
// H + R, the Robin heat kernel of the half line for mode xi.
double kernel_K(double xi, double t, double y, double z);

// Second path: Gamma(t)_xi(Y) = e^{-xi^2 t} int (Xi E)_xi(Y - Y') g(t, Y') dY' with
// (Xi E)_xi = 2(-xi^2 + |xi| d_Y) E_xi and E_xi(Y) = e^{-|xi||Y|} / (2|xi|); returns
// Gamma(t) - Gamma(0) at Y = y + z.
double kernel_R_gamma(double xi, double t, double y, double z);

}  // namespace hv
