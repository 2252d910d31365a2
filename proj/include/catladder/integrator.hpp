// Copyright 2026 The catladder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>

#include "catladder/errors.hpp"
#include "catladder/linalg.hpp"

namespace catladder {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-8;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

/// Dormand-Prince 5(4) with an RMS error norm over real and imaginary parts.
///
/// The state is complex; the absolute tolerance is atol * atol_scale[i] per
/// component. A post-step hook may modify the state after each accepted step
/// (projection); the first-same-as-last stage is then recomputed, not reused.
class Dopri5 {
 public:
  using Rhs = std::function<void(double t, const Vector& y, Vector& dy)>;
  using Hook = std::function<void(double t, Vector& y)>;

  Dopri5(IntegratorOptions opts, RealVector atol_scale)
      : opts_(opts), atol_scale_(std::move(atol_scale)) {}

  const IntegratorStats& stats() const { return stats_; }

  /// Integrates from t to t_end, landing on t_end exactly. The last step size
  /// is kept between calls.
  void advance(const Rhs& f, Vector& y, double& t, double t_end, const Hook& hook = {}) {
    if (t_end <= t) return;
    const Eigen::Index n = y.size();
    if (atol_scale_.size() != n) atol_scale_ = RealVector::Ones(n);
    k1_.resize(n);
    eval(f, t, y, k1_);
    if (!(h_ > 0.0)) h_ = initial_step(f, t, y, t_end);

    while (t < t_end) {
      if (stats_.accepted + stats_.rejected >= opts_.max_steps) {
        throw IntegrationError("maximum number of integration steps exceeded", t);
      }
      double h = std::min({h_, opts_.max_step, t_end - t});
      const bool last = (t + h >= t_end) || (t_end - (t + h) < 1e-12 * std::max(1.0, std::abs(t_end)));
      if (last) h = t_end - t;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        std::ostringstream os;
        os << "step size underflow (h = " << h << ") at t = " << t;
        throw IntegrationError(os.str(), t);
      }

      const double err = attempt(f, t, y, h);
      if (err <= 1.0) {
        ++stats_.accepted;
        t = last ? t_end : t + h;
        y = ynew_;
        if (hook) hook(t, y);
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // Keep the proposed step when the stop point shortened it.
        h_ = std::max(h_ * (last ? 1.0 : 0.0), h * (reject_streak_ ? std::min(fac, 1.0) : fac));
        reject_streak_ = 0;
        if (t < t_end) {
          if (hook) {
            eval(f, t, y, k1_);
          } else {
            k1_.swap(k7_);
          }
        }
      } else {
        ++stats_.rejected;
        ++reject_streak_;
        const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
        h_ = h * fac;
      }
    }
  }

 private:
  void eval(const Rhs& f, double t, const Vector& y, Vector& dy) {
    ++stats_.rhs_evaluations;
    f(t, y, dy);
  }

  double error_norm(const Vector& e, const Vector& y0, const Vector& y1) const {
    double acc = 0.0;
    const Eigen::Index n = e.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = opts_.atol * atol_scale_(i);
      const double sr = a + opts_.rtol * std::max(std::abs(y0(i).real()), std::abs(y1(i).real()));
      const double si = a + opts_.rtol * std::max(std::abs(y0(i).imag()), std::abs(y1(i).imag()));
      const double er = e(i).real() / sr;
      const double ei = e(i).imag() / si;
      acc += er * er + ei * ei;
    }
    const double v = std::sqrt(acc / static_cast<double>(2 * std::max<Eigen::Index>(n, 1)));
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }

  double initial_step(const Rhs& f, double t, const Vector& y, double t_end) {
    const Vector zero = Vector::Zero(y.size());
    const double d0 = error_norm(y, zero, zero) * 1.0;
    const double d1 = error_norm(k1_, zero, zero);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t);
    Vector y1 = y + h0 * k1_;
    Vector f1(y.size());
    eval(f, t + h0, y1, f1);
    const double d2 = error_norm(f1 - k1_, zero, zero) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min({100.0 * h0, h1, opts_.max_step});
  }

  double attempt(const Rhs& f, double t, const Vector& y, double h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    const Eigen::Index n = y.size();
    k2_.resize(n), k3_.resize(n), k4_.resize(n), k5_.resize(n), k6_.resize(n), k7_.resize(n);
    tmp_ = y + h * a21 * k1_;
    eval(f, t + c2 * h, tmp_, k2_);
    tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    eval(f, t + c3 * h, tmp_, k3_);
    tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    eval(f, t + c4 * h, tmp_, k4_);
    tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    eval(f, t + c5 * h, tmp_, k5_);
    tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    eval(f, t + h, tmp_, k6_);
    ynew_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    eval(f, t + h, ynew_, k7_);
    const Vector err = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    if (!ynew_.allFinite()) return std::numeric_limits<double>::infinity();
    return error_norm(err, y, ynew_);
  }

  IntegratorOptions opts_;
  RealVector atol_scale_;
  IntegratorStats stats_;
  double h_ = 0.0;
  int reject_streak_ = 0;
  Vector k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
};

}  // namespace catladder
