#include "windfuse/rtf_baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace windfuse {

int FrameMask::count(bool value) const {
  return static_cast<int>(std::count(flags.begin(), flags.end(), value));
}

FrameMask energy_vad(const Spectrogram& y_a) {
  const Eigen::Index frames = y_a.frames();
  if (frames < 5) throw ValidationError("energy_vad: need at least 5 frames");

  Eigen::VectorXd energy = y_a.data.cwiseAbs2().colwise().sum();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(frames));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return energy(a) < energy(b); });

  const auto noise_count = static_cast<std::size_t>((4 * frames) / 10);
  FrameMask mask;
  mask.flags.assign(static_cast<std::size_t>(frames), true);
  for (std::size_t i = 0; i < noise_count; ++i)
    mask.flags[static_cast<std::size_t>(order[i])] = false;
  return mask;
}

namespace {

void check_pair(const Spectrogram& y_a, const Spectrogram& y_b, const FrameMask& mask) {
  if (y_a.bins() != y_b.bins() || y_a.frames() != y_b.frames())
    throw ValidationError("covariance: channel dimension mismatch");
  if (mask.frames() != y_a.frames())
    throw ValidationError("covariance: mask length mismatch");
}

Eigen::Matrix2cd sample_covariance(const Spectrogram& y_a, const Spectrogram& y_b,
                                   const FrameMask& mask, Eigen::Index bin,
                                   bool speech_frames) {
  Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
  int n = 0;
  for (Eigen::Index t = 0; t < y_a.frames(); ++t) {
    if (mask.flags[static_cast<std::size_t>(t)] != speech_frames) continue;
    Eigen::Vector2cd v(y_a.data(bin, t), y_b.data(bin, t));
    acc += v * v.adjoint();
    ++n;
  }
  acc /= static_cast<double>(std::max(n, 1));
  acc = ((acc + acc.adjoint()) * 0.5).eval();
  const double load = 1e-10 * acc.trace().real();
  acc += load * Eigen::Matrix2cd::Identity();
  return acc;
}

struct Eig2 {
  double eig_max;
  double eig_min;
  Eigen::Vector2cd vec_max;
};

// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
Eig2 hermitian_eig2(const Eigen::Matrix2cd& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const double mean = 0.5 * (a + d);
  const double radius = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  Eig2 out;
  out.eig_max = mean + radius;
  out.eig_min = mean - radius;
  if (std::abs(b) == 0.0) {
    out.vec_max = a >= d ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    return out;
  }
  // Pick the numerically larger of the two equivalent eigenvector forms.
  Eigen::Vector2cd v1(b, Complex(out.eig_max - a, 0.0));
  Eigen::Vector2cd v2(Complex(out.eig_max - d, 0.0), std::conj(b));
  out.vec_max = v1.norm() >= v2.norm() ? v1 : v2;
  out.vec_max.normalize();
  return out;
}

}  // namespace

SpatialCovariance estimate_noise_covariance(const Spectrogram& y_a,
                                            const Spectrogram& y_b,
                                            const FrameMask& mask) {
  check_pair(y_a, y_b, mask);
  if (mask.count(false) < 2)
    throw ValidationError("covariance: need at least 2 noise-only frames");

  SpatialCovariance cov;
  cov.phi.resize(static_cast<std::size_t>(y_a.bins()));
  for (Eigen::Index f = 0; f < y_a.bins(); ++f)
    cov.phi[static_cast<std::size_t>(f)] =
        sample_covariance(y_a, y_b, mask, f, /*speech_frames=*/false);
  return cov;
}

RtfDiag cw_rtf(const Spectrogram& y_a, const Spectrogram& y_b, const FrameMask& mask) {
  check_pair(y_a, y_b, mask);
  if (mask.count(false) < 1 || mask.count(true) < 1)
    throw ValidationError("cw_rtf: need both speech-present and noise-only frames");

  RtfDiag out;
  out.h.resize(y_a.bins());
  for (Eigen::Index f = 0; f < y_a.bins(); ++f) {
    const Eigen::Matrix2cd phi_n = sample_covariance(y_a, y_b, mask, f, false);
    const Eigen::Matrix2cd phi_y = sample_covariance(y_a, y_b, mask, f, true);

    const Eig2 noise_eig = hermitian_eig2(phi_n);
    if (noise_eig.eig_min <= 0.0)
      throw ValidationError("cw_rtf: singular noise covariance");

    // Phi_n^{+-1/2} from the same eigenpair set.
    Eigen::Vector2cd u0 = noise_eig.vec_max;
    Eigen::Vector2cd u1(-std::conj(u0(1)), std::conj(u0(0)));  // orthonormal complement
    const double s0 = std::sqrt(noise_eig.eig_max);
    const double s1 = std::sqrt(noise_eig.eig_min);
    Eigen::Matrix2cd inv_sqrt = u0 * u0.adjoint() / s0 + u1 * u1.adjoint() / s1;

    const Eigen::Matrix2cd whitened = inv_sqrt * phi_y * inv_sqrt.adjoint();
    const Eig2 sig = hermitian_eig2((whitened + whitened.adjoint()) * 0.5);
    const Eigen::Vector2cd gev = inv_sqrt * sig.vec_max;  // generalized eigenvector
    const Eigen::Vector2cd steer = phi_n * gev;
    if (steer(0) == Complex(0.0, 0.0))
      throw ValidationError("cw_rtf: degenerate reference channel");
    out.h(f) = steer(1) / steer(0);
  }
  return out;
}

Spectrogram mvdr_enhance(const Spectrogram& y_a, const Spectrogram& y_b,
                         const SpatialCovariance& phi_n, const RtfDiag& h0) {
  if (phi_n.bins() != y_a.bins() || h0.h.size() != y_a.bins())
    throw ValidationError("mvdr: frequency dimension mismatch");
  if (y_a.bins() != y_b.bins() || y_a.frames() != y_b.frames())
    throw ValidationError("mvdr: channel dimension mismatch");

  Spectrogram out;
  out.config = y_a.config;
  out.data.resize(y_a.bins(), y_a.frames());
  for (Eigen::Index f = 0; f < y_a.bins(); ++f) {
    const Eigen::Matrix2cd& phi = phi_n.phi[static_cast<std::size_t>(f)];
    const Complex det = phi(0, 0) * phi(1, 1) - phi(0, 1) * phi(1, 0);
    const double scale = phi.cwiseAbs().maxCoeff();
    if (std::abs(det) <= 1e-300 || std::abs(det) < 1e-15 * scale * scale)
      throw ValidationError("mvdr: singular noise covariance");
    Eigen::Matrix2cd inv;
    inv << phi(1, 1), -phi(0, 1), -phi(1, 0), phi(0, 0);
    inv /= det;

    const Eigen::Vector2cd steer(Complex(1.0, 0.0), h0.h(f));
    const Eigen::Vector2cd num = inv * steer;
    const Complex denom = steer.dot(num);  // h^H Phi^{-1} h, real positive for PD
    const Eigen::Vector2cd w = num / denom;
    for (Eigen::Index t = 0; t < y_a.frames(); ++t)
      out.data(f, t) = std::conj(w(0)) * y_a.data(f, t) + std::conj(w(1)) * y_b.data(f, t);
  }
  return out;
}

Spectrogram color_correction(const Spectrogram& y_b, const RtfDiag& h0) {
  if (h0.h.size() != y_b.bins())
    throw ValidationError("color_correction: frequency dimension mismatch");
  const double max_mag = h0.h.cwiseAbs().maxCoeff();
  if (max_mag == 0.0) throw ValidationError("color_correction: zero RTF");

  Spectrogram out;
  out.config = y_b.config;
  out.data.resize(y_b.bins(), y_b.frames());
  const double guard = 1e-6 * max_mag;
  for (Eigen::Index f = 0; f < y_b.bins(); ++f) {
    if (std::abs(h0.h(f)) < guard)
      out.data.row(f).setZero();
    else
      out.data.row(f) = y_b.data.row(f) / h0.h(f);
  }
  return out;
}

}  // namespace windfuse
