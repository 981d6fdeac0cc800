#pragma once

namespace skewdepth {

/// Generalized inverse Gaussian GIG(lambda, chi, psi), the mixing law of the
/// GH family. Density proportional to w^(lambda-1) exp(-(chi/w + psi w)/2).
///
/// Parameter constraints:
///   lambda < 0 : chi > 0, psi >= 0
///   lambda = 0 : chi > 0, psi > 0
///   lambda > 0 : chi >= 0, psi > 0
/// psi = 0 is the inverse gamma law, chi = 0 the gamma law.
class Gig {
 public:
  Gig(double lambda, double chi, double psi);

  double lambda() const { return lambda_; }
  double chi() const { return chi_; }
  double psi() const { return psi_; }

  double log_pdf(double w) const;
  double pdf(double w) const;

  /// E(W^r); +infinity when the moment does not exist.
  double moment(double r) const;

  /// Mode of log W, i.e. the maximiser of w * pdf(w).
  double log_mode() const;

  /// Interval [lo, hi] in log w outside of which w * pdf(w) is negligible
  /// (below 1e-20 of its peak).
  double log_lower() const { return log_lo_; }
  double log_upper() const { return log_hi_; }

  /// Log of w * pdf(w) at w = exp(t).
  double log_weight(double t) const;

 private:
  double lambda_;
  double chi_;
  double psi_;
  double log_norm_;
  double log_lo_;
  double log_hi_;
};

}  // namespace skewdepth
