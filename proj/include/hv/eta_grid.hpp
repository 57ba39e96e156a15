#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace hv {

// Uniform square box [-L/2, L/2)^2 in self-similar variables, N points per
// side, periodic for spectral derivatives. Node i sits at -L/2 + i h, so eta = 0
// is node N/2.
struct EtaGrid {
  double L = 60.0;
  int N = 240;
  double h() const { return L / N; }
  double at(int i) const { return -0.5 * L + i * h(); }
  std::size_t size() const { return static_cast<std::size_t>(N) * N; }
  // angular wavenumber of index k (FFT order)
  double wave(int k) const;
};
using EtaGridPtr = std::shared_ptr<const EtaGrid>;
EtaGridPtr make_eta_grid(double L, int N);

// Values w(i, j) at (eta1_i, eta2_j), stored i-major.
struct EtaField {
  EtaGridPtr grid;
  std::vector<double> v;
  explicit EtaField(EtaGridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}
  double& operator()(int i, int j) { return v[static_cast<std::size_t>(i) * grid->N + j]; }
  double operator()(int i, int j) const { return v[static_cast<std::size_t>(i) * grid->N + j]; }
};

EtaField sample_eta(const EtaGridPtr& g, const std::function<double(double, double)>& f);

// Spectral operators on the periodic box; m(k1, k2) multiplies the coefficients.
EtaField eta_spectral(const EtaField& w, const std::function<std::complex<double>(double, double)>& m);
EtaField eta_d1(const EtaField& w);
EtaField eta_d2(const EtaField& w);
EtaField eta_lap(const EtaField& w);

double eta_integral(const EtaField& w);
// (int |w|^2 <eta>^{2m} d eta)^{1/2} by the rectangle rule.
double eta_norm_L2m(const EtaField& w, double m);
// Largest |w| within `band` nodes of the box edge, relative to max |w|.
double eta_edge_ratio(const EtaField& w, int band);

EtaField operator+(const EtaField& a, const EtaField& b);
EtaField operator-(const EtaField& a, const EtaField& b);
EtaField operator*(double c, const EtaField& a);
EtaField hadamard(const EtaField& a, const EtaField& b);

// Trigonometric interpolation at every (xs[a], ys[b]), stored a-major; zero
// outside the box. Nyquist terms are dropped.
std::vector<double> eta_interpolate_spectral(const EtaField& w, const std::vector<double>& xs,
                                             const std::vector<double>& ys);

// Cubic (Catmull-Rom) interpolation; zero outside the box.
double eta_value_at(const EtaField& w, double e1, double e2);

}  // namespace hv
