#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "kgops/grid.hpp"

namespace kgops {

using Spectrum = std::vector<std::complex<double>>;

namespace detail {

// Cached FFTW plans per (dim, n, sign). Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they are deterministic and can execute
// on any caller buffer.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans p;
    return p;
  }

  void execute(const SpatialGrid& g, std::complex<double>* data, int sign) {
    fftw_plan plan = get_plan(g, sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
  }

 private:
  FftPlans() = default;
  ~FftPlans() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get_plan(const SpatialGrid& g, int sign) {
    std::scoped_lock lock(mutex_);
    const auto key = std::make_tuple(g.dim, g.n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<int> shape(g.dim, g.n);
    Spectrum scratch(g.node_count());
    fftw_plan plan = fftw_plan_dft(
        g.dim, shape.data(), reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_[key] = plan;
    return plan;
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace detail

inline void fft_forward(const SpatialGrid& g, Spectrum& data) {
  detail::FftPlans::instance().execute(g, data.data(), FFTW_FORWARD);
}

// Normalized inverse (divides by N^d), so backward(forward(x)) == x.
inline void fft_backward(const SpatialGrid& g, Spectrum& data) {
  detail::FftPlans::instance().execute(g, data.data(), FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(g.node_count());
  for (auto& z : data) z *= inv;
}

inline Spectrum fft_of_field(const LatticeField& f) {
  Spectrum out(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) out[i] = f.values[i];
  fft_forward(f.grid, out);
  return out;
}

inline LatticeField field_from_spectrum(const SpatialGrid& g, Spectrum spec) {
  fft_backward(g, spec);
  LatticeField out(g);
  for (std::size_t i = 0; i < spec.size(); ++i) out.values[i] = spec[i].real();
  return out;
}

// |p|^2 per spectral bin, row-major FFT layout.
inline std::vector<double> momentum_squared_table(const SpatialGrid& g) {
  std::vector<double> out(g.node_count());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    int idx[3];
    g.decode(flat, idx);
    double p2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double p = g.momentum(idx[a]);
      p2 += p * p;
    }
    out[flat] = p2;
  }
  return out;
}

// Dispersion table omega_p = sqrt(|p|^2 + m^2) on the momentum lattice.
inline std::vector<double> omega_table(const SpatialGrid& g, double mass) {
  auto out = momentum_squared_table(g);
  for (auto& v : out) v = std::sqrt(v + mass * mass);
  return out;
}

// Spectral Laplacian of a real lattice field.
inline LatticeField spectral_laplacian(const LatticeField& f) {
  Spectrum spec = fft_of_field(f);
  const auto p2 = momentum_squared_table(f.grid);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= -p2[i];
  return field_from_spectrum(f.grid, std::move(spec));
}

}  // namespace kgops
