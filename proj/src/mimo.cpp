#include "secnet/mimo.hpp"

#include <cmath>
#include <string>

#include "secnet/errors.hpp"

namespace secnet::mimo {

PowerSplit::PowerSplit(double P, double phi, int M, int N) : P_(P), phi_(phi), M_(M), N_(N) {
  if (!std::isfinite(P) || P <= 0.0) throw ParameterError("transmit power P must be positive");
  if (!(phi > 0.0 && phi < 1.0)) {
    throw ParameterError("power ratio phi must lie in (0,1), got " + std::to_string(phi));
  }
  if (N < 1 || N > M - 1) {
    throw ParameterError("need 1 <= N <= M-1, got M=" + std::to_string(M) + " N=" + std::to_string(N));
  }
  P_s_ = phi * P / N;
  P_n_ = (1.0 - phi) * P / (M - N);
}

FadingVector sample_fading(int M, Engine& rng) {
  if (M < 1) throw ParameterError("antenna count must be positive");
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  FadingVector h(M);
  for (int i = 0; i < M; ++i) {
    const double re = half(rng);
    const double im = half(rng);
    h(i) = {re, im};
  }
  return h;
}

PrecoderSet zf_precoder(std::span<const FadingVector> channels) {
  const auto N = static_cast<Eigen::Index>(channels.size());
  if (N < 1) throw ParameterError("zf_precoder needs at least one channel");
  const Eigen::Index M = channels[0].size();
  if (N > M - 1) throw ParameterError("zf_precoder needs N <= M-1");

  // Hbar^H = [hbar_0, ..., hbar_{N-1}]  (M x N)
  Eigen::MatrixXcd hbar_h(M, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    if (channels[j].size() != M) throw ParameterError("channel vectors must share one length");
    const double norm = channels[j].norm();
    if (!(norm > 0.0)) throw DegenerateChannelError("zero channel vector");
    hbar_h.col(j) = channels[j] / norm;
  }

  const Eigen::MatrixXcd gram = hbar_h.adjoint() * hbar_h;  // Hbar Hbar^H
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
    throw DegenerateChannelError("channel Gram matrix is numerically singular (condition " +
                                 std::to_string(lo > 0.0 ? hi / lo : INFINITY) + ")");
  }

  PrecoderSet out;
  out.W = hbar_h * gram.ldlt().solve(Eigen::MatrixXcd::Identity(N, N));
  for (Eigen::Index k = 0; k < N; ++k) out.W.col(k).normalize();

  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(hbar_h);
  const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(M, M);
  out.G = Q.rightCols(M - N);
  return out;
}

GainRecord effective_gains(std::span<const FadingVector> channels, const FadingVector& other,
                           const PrecoderSet& precoders) {
  if (channels.empty()) throw ParameterError("effective_gains needs the intended channel");
  GainRecord g;
  g.own = (channels[0].adjoint() * precoders.W).squaredNorm();
  g.interference = (other.adjoint() * precoders.W).squaredNorm();
  g.artificial = (other.adjoint() * precoders.G).squaredNorm();
  g.stream = std::norm(other.dot(precoders.W.col(0)));
  return g;
}

PrecoderResiduals precoder_residuals(std::span<const FadingVector> channels, const PrecoderSet& precoders) {
  PrecoderResiduals r;
  const auto N = static_cast<Eigen::Index>(channels.size());
  for (Eigen::Index j = 0; j < N; ++j) {
    const FadingVector hbar = channels[j].normalized();
    for (Eigen::Index k = 0; k < N; ++k) {
      if (j != k) r.max_cross_talk = std::max(r.max_cross_talk, std::abs(hbar.dot(precoders.W.col(k))));
    }
    if (precoders.G.cols() > 0) {
      r.max_null_leak = std::max(r.max_null_leak, (channels[j].adjoint() * precoders.G).norm());
    }
  }
  for (Eigen::Index k = 0; k < precoders.W.cols(); ++k) {
    r.max_column_norm_error = std::max(r.max_column_norm_error, std::abs(precoders.W.col(k).norm() - 1.0));
  }
  const Eigen::Index K = precoders.G.cols();
  if (K > 0) {
    r.basis_error = (precoders.G.adjoint() * precoders.G - Eigen::MatrixXcd::Identity(K, K)).cwiseAbs().maxCoeff();
  }
  return r;
}

}  // namespace secnet::mimo
