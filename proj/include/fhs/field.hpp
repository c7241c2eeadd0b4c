#pragma once

#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fhs/errors.hpp"
#include "fhs/fft.hpp"
#include "fhs/grid.hpp"

namespace fhs {

namespace detail {

// The stagger shifts every node by h/2, so the true coefficients
//   c_k = h^n sum_j u_j exp(-2 pi i xi_k . x_j)
// differ from the raw DFT by the per-axis phase exp(i pi k (1 - 1/N)).
inline std::vector<std::complex<double>> axis_phases(const SpectralGrid& g) {
  const double pi = 3.14159265358979323846;
  std::vector<std::complex<double>> ph(static_cast<std::size_t>(g.N));
  for (int b = 0; b < g.N; ++b) {
    const double k = g.signed_k(b);
    const double arg = pi * k * (1.0 - 1.0 / g.N);
    ph[static_cast<std::size_t>(b)] = std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return ph;
}

inline std::vector<int> fft_dims(const SpectralGrid& g) {
  return std::vector<int>(static_cast<std::size_t>(g.n), g.N);
}

inline std::vector<std::complex<double>> analyze(const SpectralGrid& g,
                                                 const std::vector<double>& values) {
  const std::size_t total = g.size();
  std::vector<std::complex<double>> buf(total);
  for (std::size_t j = 0; j < total; ++j) buf[j] = values[j];
  fft::forward(fft_dims(g), buf.data(), buf.data());
  const auto ph = axis_phases(g);
  const double hn = g.cell_volume();
  for (std::size_t f = 0; f < total; ++f) {
    auto b = g.unflatten(f);
    std::complex<double> p(1.0, 0.0);
    for (int a = 0; a < g.n; ++a) p *= ph[static_cast<std::size_t>(b[a])];
    buf[f] *= hn * p;
  }
  return buf;
}

inline std::vector<double> synthesize(const SpectralGrid& g,
                                      const std::vector<std::complex<double>>& coeffs) {
  const std::size_t total = g.size();
  std::vector<std::complex<double>> buf(total);
  const auto ph = axis_phases(g);
  const double vol = std::pow(2.0 * g.L, g.n);
  for (std::size_t f = 0; f < total; ++f) {
    auto b = g.unflatten(f);
    std::complex<double> p(1.0, 0.0);
    for (int a = 0; a < g.n; ++a) p *= ph[static_cast<std::size_t>(b[a])];
    buf[f] = coeffs[f] * std::conj(p) / vol;
  }
  fft::backward(fft_dims(g), buf.data(), buf.data());
  std::vector<double> out(total);
  for (std::size_t j = 0; j < total; ++j) out[j] = buf[j].real();
  return out;
}

}  // namespace detail

// Real-valued samples on a SpectralGrid with lazily cached Fourier
// coefficients. Values are immutable after construction; the cache is
// compute-once and shared across copies.
class Field {
 public:
  Field(SpectralGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)), box_(std::make_shared<CoeffBox>()) {
    if (values_.size() != grid_.size()) throw validation_error("Field: values size != grid size");
  }

  static Field from_coeffs(const SpectralGrid& grid, std::vector<std::complex<double>> coeffs) {
    if (coeffs.size() != grid.size()) throw validation_error("Field: coeffs size != grid size");
    Field f(grid, detail::synthesize(grid, coeffs));
    std::call_once(f.box_->flag, [&] { f.box_->coeffs = std::move(coeffs); });
    return f;
  }

  const SpectralGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const { return values_.size(); }

  const std::vector<std::complex<double>>& coeffs() const {
    std::call_once(box_->flag, [&] { box_->coeffs = detail::analyze(grid_, values_); });
    return box_->coeffs;
  }

  double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }

  // h^n sum u^2 (discrete L2 norm squared).
  double l2_sq() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s * grid_.cell_volume();
  }

  void save_fxv(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open for write: " + path);
    f.write("FXV1", 4);
    const std::uint32_t n32 = static_cast<std::uint32_t>(grid_.n);
    const std::uint32_t N32 = static_cast<std::uint32_t>(grid_.N);
    f.write(reinterpret_cast<const char*>(&n32), 4);
    f.write(reinterpret_cast<const char*>(&N32), 4);
    f.write(reinterpret_cast<const char*>(&grid_.L), 8);
    f.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * 8));
    if (!f) throw io_error("write failed: " + path);
  }

  static Field load_fxv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open for read: " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "FXV1", 4) != 0) throw io_error("bad magic in " + path);
    std::uint32_t n32 = 0, N32 = 0;
    double L = 0.0;
    f.read(reinterpret_cast<char*>(&n32), 4);
    f.read(reinterpret_cast<char*>(&N32), 4);
    f.read(reinterpret_cast<char*>(&L), 8);
    SpectralGrid g = make_grid(static_cast<int>(n32), static_cast<int>(N32), L);
    std::vector<double> vals(g.size());
    f.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(vals.size() * 8));
    if (!f) throw io_error("truncated field file: " + path);
    return Field(g, std::move(vals));
  }

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    for (int a = 0; a < grid_.n; ++a) os << "x" << (a + 1) << ",";
    os << "value\n";
    for (std::size_t j = 0; j < values_.size(); ++j) {
      auto x = grid_.node(j);
      for (int a = 0; a < grid_.n; ++a) os << x[a] << ",";
      os << values_[j] << "\n";
    }
    return os.str();
  }

 private:
  struct CoeffBox {
    std::once_flag flag;
    std::vector<std::complex<double>> coeffs;
  };

  SpectralGrid grid_;
  std::vector<double> values_;
  std::shared_ptr<CoeffBox> box_;
};

}  // namespace fhs
