#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "secnet/rng.hpp"

namespace secnet::mimo {

using FadingVector = Eigen::VectorXcd;

/// Zero-forcing precoder W (M x N, unit-norm columns) and an orthonormal
/// artificial-noise basis G (M x (M-N)) for the null space of the served channels.
struct PrecoderSet {
  Eigen::MatrixXcd W;
  Eigen::MatrixXcd G;

  Eigen::Index antennas() const { return W.rows(); }
  Eigen::Index streams() const { return W.cols(); }
};

/// P_s = phi P / N per stream and P_n = (1-phi) P / (M-N) per noise dimension.
class PowerSplit {
 public:
  PowerSplit(double P, double phi, int M, int N);

  double total_power() const { return P_; }
  double phi() const { return phi_; }
  int antennas() const { return M_; }
  int users() const { return N_; }
  double signal_power() const { return P_s_; }
  double noise_power() const { return P_n_; }
  /// (P_n - P_s) / (P_s P_n); zero exactly when phi = N/M.
  double zeta() const { return (P_n_ - P_s_) / (P_s_ * P_n_); }
  double equal_power_phi() const { return static_cast<double>(N_) / M_; }

 private:
  double P_;
  double phi_;
  int M_;
  int N_;
  double P_s_;
  double P_n_;
};

inline PowerSplit power_split(double P, double phi, int M, int N) { return PowerSplit(P, phi, M, N); }

/// i.i.d. CN(0,1) entries.
FadingVector sample_fading(int M, Engine& rng);

/// Condition-number ceiling of the normalised Gram matrix before a channel
/// set is treated as singular.
inline constexpr double kMaxGramCondition = 1e12;

/// Rows of the channel matrix are normalised, the pseudo-inverse is formed,
/// and its columns are normalised. Throws DegenerateChannelError if the Gram
/// matrix is numerically singular.
PrecoderSet zf_precoder(std::span<const FadingVector> channels);

struct GainRecord {
  double own = 0.0;            ///< ||h_00^H W||^2
  double interference = 0.0;   ///< ||g^H W||^2 for an unrelated channel g
  double artificial = 0.0;     ///< ||g^H G||^2
  double stream = 0.0;         ///< |g^H w_0|^2, the leaked protected stream
};

/// `channels[0]` is the intended user's channel; `other` is an independent
/// channel (interfered user or eavesdropper).
GainRecord effective_gains(std::span<const FadingVector> channels, const FadingVector& other,
                           const PrecoderSet& precoders);

/// Orthogonality residuals used by tests and the simulator's self checks.
struct PrecoderResiduals {
  double max_cross_talk = 0.0;   ///< max_{j != k} |hbar_j^H w_k|
  double max_null_leak = 0.0;    ///< max_j ||h_j^H G||
  double basis_error = 0.0;      ///< max |G^H G - I|
  double max_column_norm_error = 0.0;
};

PrecoderResiduals precoder_residuals(std::span<const FadingVector> channels, const PrecoderSet& precoders);

}  // namespace secnet::mimo
