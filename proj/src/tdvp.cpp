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

#include "catladder/tdvp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "catladder/errors.hpp"

namespace catladder {

void EngineConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || std::isnan(v)) throw ConfigError(std::string(name) + " must be > 0");
  };
  positive(rtol, "rtol");
  positive(atol, "atol");
  positive(epsilon_alpha, "epsilon_alpha");
  positive(max_step, "max_step");
  if (!(svd_cutoff > 0.0 && svd_cutoff < 1.0)) throw ConfigError("svd_cutoff must lie in (0, 1)");
}

RealVector ladder_scale(const LadderBasisSpec& spec) {
  RealVector s(static_cast<Eigen::Index>(spec.dim()));
  for (int n = 0; n <= spec.depth; ++n) {
    const double v = std::exp(0.5 * std::lgamma(n + 1.0));
    for (int p = 0; p < spec.parities(); ++p) s(static_cast<Eigen::Index>(spec.index(n, p))) = v;
  }
  return s;
}

RealVector ladder_scale(std::span<const LadderBasisSpec> specs) {
  RealVector out = RealVector::Ones(1);
  for (const auto& sp : specs) {
    const RealVector s = ladder_scale(sp);
    RealVector next(out.size() * s.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * s.size(), s.size()) = out(i) * s;
    out = std::move(next);
  }
  return out;
}

namespace {

Matrix scale_both(const Matrix& x, const RealVector& row, const RealVector& col) {
  return (row.cast<Complex>().asDiagonal() * x) * col.cast<Complex>().asDiagonal();
}

Matrix unscale(const Matrix& x, const RealVector& s) {
  const RealVector inv = s.cwiseInverse();
  return scale_both(x, inv, inv);
}

std::string mode_label(std::size_t k) { return "mode " + std::to_string(k); }

}  // namespace

ModeGeometry build_mode_geometry(const LadderBasisSpec& spec, int extra_degree, double svd_cutoff,
                                 std::size_t mode_index) {
  if (extra_degree < 1) throw BasisError("geometry needs extra_degree >= 1 for block shifts");
  ModeGeometry g{spec, build_overlap(spec, extra_degree), {}, {}, {}, {}, {}, {}, 0.0};
  g.S = g.overlap.restricted();
  g.S_l = g.overlap.shifted(1, 0);
  g.S_r = g.overlap.shifted(0, 1);
  g.S_lr = g.overlap.shifted(1, 1);

  const RealVector lam = ladder_scale(spec);
  const Matrix s_hat = unscale(g.S, lam);
  auto inv = spectral_inverse(s_hat, svd_cutoff);
  if (!inv) {
    throw GeometryError(mode_label(mode_index) + ": overlap matrix is singular beyond regularization " +
                        "(alpha = " + std::to_string(spec.alpha.real()) + "+" +
                        std::to_string(spec.alpha.imag()) + "i, depth " + std::to_string(spec.depth) +
                        ")");
  }
  g.scaled = std::move(*inv);
  g.S_pinv = unscale(g.scaled.inverse, lam);

  const Matrix sl_hat = unscale(g.S_l, lam);
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const double base = sl_hat.norm();
  g.orthogonality_defect =
      base > 0.0 ? (sl_hat * (Matrix::Identity(d, d) - g.scaled.projector)).norm() / base : 0.0;
  return g;
}

Matrix GeometryBundle::embed(std::size_t k, const Matrix& factor) const {
  std::vector<Matrix> fs;
  for (std::size_t j = 0; j < modes.size(); ++j) fs.push_back(j == k ? factor : modes[j].S);
  return kron(fs);
}

std::vector<LadderBasisSpec> with_alphas(std::vector<LadderBasisSpec> specs,
                                         const std::vector<Complex>& alphas) {
  if (alphas.size() != specs.size()) {
    throw BasisError("got " + std::to_string(alphas.size()) + " displacements for " +
                     std::to_string(specs.size()) + " modes");
  }
  for (std::size_t k = 0; k < specs.size(); ++k) specs[k].alpha = alphas[k];
  return specs;
}

namespace {

int geometry_extra_degree(const ModelSpec& model, std::size_t k) {
  return max_creation_power(model, k) + 1;
}

void check_shapes(const std::vector<LadderBasisSpec>& specs, const ModelSpec& model) {
  if (specs.size() != model.modes) {
    throw ModelError("model has " + std::to_string(model.modes) + " modes but " +
                     std::to_string(specs.size()) + " basis specs were given");
  }
}

}  // namespace

GeometryBundle assemble_geometry(const std::vector<Complex>& alphas,
                                 const std::vector<LadderBasisSpec>& specs_in,
                                 const ModelSpec& model, double t, const EngineConfig& config) {
  config.validate();
  model.validate();
  check_shapes(specs_in, model);
  const auto specs = with_alphas(specs_in, alphas);

  GeometryBundle g;
  g.t = t;
  g.epsilon_alpha = config.epsilon_alpha;
  g.freeze_alpha = config.freeze_alpha;
  std::vector<OverlapMatrix> overlaps;
  std::vector<Matrix> s_factors, pinv_factors;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    g.modes.push_back(
        build_mode_geometry(specs[k], geometry_extra_degree(model, k), config.svd_cutoff, k));
    g.dims.push_back(specs[k].dim());
    overlaps.push_back(g.modes.back().overlap);
    s_factors.push_back(g.modes.back().S);
    pinv_factors.push_back(g.modes.back().S_pinv);
  }
  g.S = kron(s_factors);
  g.S_pinv = kron(pinv_factors);
  g.terms = kraus_terms(model, t);
  for (const auto& term : g.terms) {
    g.left.push_back(operator_matrix(term.left, overlaps));
    g.right.push_back(operator_matrix(term.right, overlaps));
    std::vector<Matrix> shifted;
    for (std::size_t k = 0; k < specs.size(); ++k) {
      shifted.push_back(operator_kron(term.left, overlaps, k).dense());
    }
    g.left_shifted.push_back(std::move(shifted));
  }
  return g;
}

namespace {

void check_dim(const GeometryBundle& g, const Matrix& B) {
  if (B.rows() != g.S.rows() || B.cols() != g.S.cols()) {
    throw std::invalid_argument("coefficient matrix is " + std::to_string(B.rows()) + "x" +
                                std::to_string(B.cols()) + ", basis dimension is " +
                                std::to_string(g.S.rows()));
  }
}

}  // namespace

Matrix liouvillian_matrix(const GeometryBundle& g, const Matrix& B) {
  check_dim(g, B);
  Matrix L = Matrix::Zero(B.rows(), B.cols());
  for (std::size_t p = 0; p < g.terms.size(); ++p) L += g.terms[p].coeff * (g.left[p] * B * g.right[p]);
  return L;
}

Matrix corner_tensor(const GeometryBundle& g, std::size_t k) {
  const ModeGeometry& m = g.modes.at(k);
  return g.embed(k, m.S_lr) - g.embed(k, m.S_l) * g.S_pinv * g.embed(k, m.S_r);
}

namespace {

// Dense orthonormal-frame transforms (scaled sqrt / inverse sqrt), for the gate norm.
struct DenseFrame {
  Matrix q;
  Matrix q_inv;
  RealVector lam;
};

DenseFrame dense_frame(const GeometryBundle& g) {
  std::vector<Matrix> qs, qis;
  std::vector<LadderBasisSpec> specs;
  for (const auto& m : g.modes) {
    qs.push_back(m.scaled.sqrt);
    qis.push_back(m.scaled.inverse_sqrt);
    specs.push_back(m.spec);
  }
  return {kron(qs), kron(qis), ladder_scale(specs)};
}

}  // namespace

AlphaDot compute_alpha_dot(const GeometryBundle& g, const Matrix& B, const Matrix& L) {
  check_dim(g, B);
  const std::size_t M = g.mode_count();
  AlphaDot out{std::vector<Complex>(M, 0.0), std::vector<bool>(M, true), std::vector<Complex>(M, 0.0),
               std::vector<double>(M, 0.0)};
  if (g.freeze_alpha) return out;

  const DenseFrame frame = dense_frame(g);
  const RealVector inv_lam = frame.lam.cwiseInverse();
  const Matrix b_tilde = frame.q * scale_both(B, frame.lam, frame.lam) * frame.q;
  const double b_norm2 = b_tilde.squaredNorm();
  const Matrix bsb = B * g.S * B;

  for (std::size_t k = 0; k < M; ++k) {
    const Matrix c0 = corner_tensor(g, k);
    const Matrix c0_tilde = frame.q_inv * scale_both(c0, inv_lam, inv_lam) * frame.q_inv;
    const Complex d = trace_of_product(c0, bsb);
    const double threshold = g.epsilon_alpha * b_norm2 * c0_tilde.norm();
    out.denominators[k] = d;
    out.thresholds[k] = threshold;
    if (!(std::abs(d) > threshold)) continue;

    Matrix l_shift = Matrix::Zero(B.rows(), B.cols());
    for (std::size_t p = 0; p < g.terms.size(); ++p) {
      l_shift += g.terms[p].coeff * (g.left_shifted[p][k] * B * g.right[p]);
    }
    const Matrix s_l = g.embed(k, g.modes[k].S_l);
    const Matrix y0 = l_shift - s_l * g.S_pinv * L;
    out.values[k] = trace_of_product(y0, B) / d;
    out.frozen[k] = false;
  }
  return out;
}

AlphaDot compute_alpha_dot(const GeometryBundle& g, const Matrix& B) {
  return compute_alpha_dot(g, B, liouvillian_matrix(g, B));
}

Matrix compute_B_dot(const GeometryBundle& g, const Matrix& B, const Matrix& L,
                     const std::vector<Complex>& alpha_dots) {
  check_dim(g, B);
  if (alpha_dots.size() != g.mode_count()) throw std::invalid_argument("alpha_dots size mismatch");
  Matrix out = g.S_pinv * L * g.S_pinv;
  Matrix tau = Matrix::Zero(B.rows(), B.cols());
  bool moving = false;
  for (std::size_t k = 0; k < g.mode_count(); ++k) {
    if (alpha_dots[k] == Complex(0.0)) continue;
    moving = true;
    tau += alpha_dots[k] * g.embed(k, g.modes[k].S_r);
  }
  if (moving) out -= g.S_pinv * tau * B + B * tau.adjoint() * g.S_pinv;
  return out;
}

Matrix compute_B_dot(const GeometryBundle& g, const Matrix& B, const std::vector<Complex>& alpha_dots) {
  return compute_B_dot(g, B, liouvillian_matrix(g, B), alpha_dots);
}

// ---------------------------------------------------------------------------
// Factored right-hand side in the orthonormal frame of the rescaled basis.
//
// With S_hat = Q^2 per mode and B_tilde = Q B_hat Q, every block of the
// equations of motion becomes Q^+ X Q^+ for a per-mode factor X, and the
// identity polynomial maps to the projector onto the retained subspace, which
// acts trivially on B_tilde. Traces are taken elementwise to avoid D^3 work.
// ---------------------------------------------------------------------------
namespace {

std::optional<Complex> scalar_value(const OperatorPolynomial& p) {
  if (p.is_zero()) return Complex(0.0);
  if (p.monomials().size() != 1) return std::nullopt;
  const auto& m = p.monomials().front();
  for (const auto& pw : m.powers) {
    if (!pw.is_identity()) return std::nullopt;
  }
  return m.coeff;
}

struct FrameMode {
  OverlapMatrix overlap;
  RealVector lam;
  Matrix s_hat;
  Matrix s_l_hat;
  Matrix pinv_hat;
  Matrix q, q_inv;
  Matrix tau;     // Q^+ S_r Q^+
  Matrix corner;  // Q^+ C0_k Q^+
  double corner_norm = 0.0;
  double projector_norm = 0.0;
  double orthogonality_defect = 0.0;
};

class FrameGeometry {
 public:
  FrameGeometry(const std::vector<LadderBasisSpec>& specs, const std::vector<int>& extra,
                double cutoff) {
    for (std::size_t k = 0; k < specs.size(); ++k) {
      ModeGeometry mg = build_mode_geometry(specs[k], extra[k], cutoff, k);
      FrameMode fm{mg.overlap, ladder_scale(specs[k]), {}, {}, {}, {}, {}, {}, {}, 0.0, 0.0, 0.0};
      fm.s_hat = unscale(mg.S, fm.lam);
      fm.s_l_hat = unscale(mg.S_l, fm.lam);
      fm.pinv_hat = mg.scaled.inverse;
      fm.q = mg.scaled.sqrt;
      fm.q_inv = mg.scaled.inverse_sqrt;
      fm.tau = fm.q_inv * unscale(mg.S_r, fm.lam) * fm.q_inv;
      const Matrix c0 = unscale(mg.S_lr, fm.lam) - fm.s_l_hat * fm.pinv_hat * unscale(mg.S_r, fm.lam);
      fm.corner = fm.q_inv * c0 * fm.q_inv;
      fm.corner_norm = fm.corner.norm();
      fm.projector_norm = std::sqrt(static_cast<double>(mg.scaled.retained));
      fm.orthogonality_defect = mg.orthogonality_defect;
      dims_.push_back(specs[k].dim());
      modes_.push_back(std::move(fm));
    }
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  const FrameMode& mode(std::size_t k) const { return modes_[k]; }
  std::size_t size() const { return modes_.size(); }

  // Q^+ M_hat Q^+ for a monomial factor; nullopt for the identity.
  std::optional<Matrix> factor(std::size_t k, const ModePowers& pw) {
    if (pw.is_identity()) return std::nullopt;
    const auto key = std::make_tuple(k, pw.creation, pw.annihilation, 0);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const FrameMode& fm = modes_[k];
    const Matrix m_hat = unscale(monomial_matrix(pw, fm.overlap), fm.lam);
    return cache_[key] = fm.q_inv * m_hat * fm.q_inv;
  }

  // Q^+ (M^(l) - S^(l) S^+ M) Q^+: the mode-k factor of the Y0 force.
  Matrix force_factor(std::size_t k, const ModePowers& pw) {
    const auto key = std::make_tuple(k, pw.creation, pw.annihilation, 1);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const FrameMode& fm = modes_[k];
    const Matrix m_hat = unscale(monomial_matrix(pw, fm.overlap), fm.lam);
    const Matrix ml_hat = unscale(monomial_matrix(pw, fm.overlap, 1), fm.lam);
    return cache_[key] = fm.q_inv * (ml_hat - fm.s_l_hat * fm.pinv_hat * m_hat) * fm.q_inv;
  }

  KronOperator frame_operator(const OperatorPolynomial& poly) {
    KronOperator out(dims_);
    for (const auto& m : poly.monomials()) {
      KronTerm t{m.coeff, {}};
      for (std::size_t k = 0; k < size(); ++k) t.factors.push_back(factor(k, m.powers[k]));
      out.add(std::move(t));
    }
    return out;
  }

  // Monomials acting trivially on mode k give an exactly vanishing force.
  KronOperator force_operator(const OperatorPolynomial& poly, std::size_t k) {
    KronOperator out(dims_);
    for (const auto& m : poly.monomials()) {
      if (m.powers[k].is_identity()) continue;
      KronTerm t{m.coeff, {}};
      for (std::size_t j = 0; j < size(); ++j) {
        t.factors.push_back(j == k ? std::optional<Matrix>(force_factor(k, m.powers[k]))
                                   : factor(j, m.powers[j]));
      }
      out.add(std::move(t));
    }
    return out;
  }

  // Q (.) Q and Q^+ (.) Q^+ on both sides.
  Matrix to_frame(const Matrix& b_hat) const { return sandwich(b_hat, false); }
  Matrix from_frame(const Matrix& x) const { return sandwich(x, true); }

  Complex trace_s(const Matrix& b_hat) const {
    Matrix y = b_hat;
    for (std::size_t k = 0; k < size(); ++k) y = apply_mode_factor(modes_[k].s_hat, dims_, k, y);
    return y.trace();
  }

 private:
  Matrix sandwich(const Matrix& x, bool inverse) const {
    Matrix y = x;
    for (std::size_t k = 0; k < size(); ++k) {
      const Matrix& f = inverse ? modes_[k].q_inv : modes_[k].q;
      y = apply_mode_factor(f, dims_, k, y);
    }
    Matrix yt = y.transpose();
    for (std::size_t k = 0; k < size(); ++k) {
      const Matrix& f = inverse ? modes_[k].q_inv : modes_[k].q;
      yt = apply_mode_factor(f.transpose(), dims_, k, yt);
    }
    return yt.transpose();
  }

  std::vector<std::size_t> dims_;
  std::vector<FrameMode> modes_;
  std::map<std::tuple<std::size_t, int, int, int>, Matrix> cache_;
};

struct SandwichTerm {
  KronOperator left;
  KronOperator right;
  Complex coeff;
  std::vector<KronOperator> force;  // per mode
  bool self_adjoint;                 // right == left† with real coefficient
};

// Kraus terms grouped by which side carries the identity.
struct FrameGenerator {
  KronOperator left_group;
  KronOperator right_group;
  bool right_is_adjoint = false;
  std::vector<KronOperator> left_force;  // per mode
  std::vector<SandwichTerm> sandwich;
};

FrameGenerator build_generator(FrameGeometry& geo, const KrausTermList& terms, std::size_t modes) {
  OperatorPolynomial left_poly(modes), right_poly(modes);
  std::vector<const KrausTerm*> rest;
  for (const auto& t : terms) {
    if (auto c = scalar_value(t.right)) {
      left_poly += (t.coeff * *c) * t.left;
    } else if (auto c2 = scalar_value(t.left)) {
      right_poly += (t.coeff * *c2) * t.right;
    } else {
      rest.push_back(&t);
    }
  }
  FrameGenerator gen;
  gen.left_group = geo.frame_operator(left_poly);
  gen.right_group = geo.frame_operator(right_poly);
  gen.right_is_adjoint = right_poly == left_poly.adjoint();
  for (std::size_t k = 0; k < modes; ++k) gen.left_force.push_back(geo.force_operator(left_poly, k));
  for (const KrausTerm* t : rest) {
    SandwichTerm s{geo.frame_operator(t->left), geo.frame_operator(t->right), t->coeff, {},
                   t->coeff.imag() == 0.0 && t->right == t->left.adjoint()};
    for (std::size_t k = 0; k < modes; ++k) s.force.push_back(geo.force_operator(t->left, k));
    gen.sandwich.push_back(std::move(s));
  }
  return gen;
}

Matrix hermitian_part_sum(const Matrix& x) {
  Matrix out = x + x.adjoint();
  return out;
}

struct GateStatus {
  std::vector<bool> open;
  std::vector<Complex> denominators;
  std::vector<double> thresholds;
};

GateStatus gate_status(const FrameGeometry& geo, const Matrix& b_tilde, double eps) {
  const std::size_t M = geo.size();
  GateStatus gs{std::vector<bool>(M, false), std::vector<Complex>(M, 0.0), std::vector<double>(M, 0.0)};
  const double b_norm2 = b_tilde.squaredNorm();
  double proj_all = 1.0;
  for (std::size_t k = 0; k < M; ++k) proj_all *= geo.mode(k).projector_norm;
  for (std::size_t k = 0; k < M; ++k) {
    const FrameMode& fm = geo.mode(k);
    const Matrix cb = apply_mode_factor(fm.corner, geo.dims(), k, b_tilde);
    gs.denominators[k] = trace_of_product(cb, b_tilde);
    gs.thresholds[k] = eps * b_norm2 * fm.corner_norm * proj_all / fm.projector_norm;
    gs.open[k] = std::abs(gs.denominators[k]) > gs.thresholds[k];
  }
  return gs;
}

// Owns geometry and generator caches across right-hand-side evaluations.
class FrameRhs {
 public:
  FrameRhs(std::vector<LadderBasisSpec> specs, const ModelSpec& model, const EngineConfig& config)
      : specs_(std::move(specs)), model_(model), config_(config) {
    for (std::size_t k = 0; k < specs_.size(); ++k) extra_.push_back(geometry_extra_degree(model, k));
  }

  FrameGeometry& geometry(const std::vector<Complex>& alphas) {
    if (!geo_ || alphas != geo_alphas_) {
      geo_ = std::make_unique<FrameGeometry>(with_alphas(specs_, alphas), extra_, config_.svd_cutoff);
      geo_alphas_ = alphas;
      gen_.reset();
    }
    return *geo_;
  }

  FrameGenerator& generator(const std::vector<Complex>& alphas, double t_segment) {
    FrameGeometry& geo = geometry(alphas);
    if (!gen_ || t_segment != gen_t_) {
      gen_ = std::make_unique<FrameGenerator>(build_generator(geo, kraus_terms(model_, t_segment), specs_.size()));
      gen_t_ = t_segment;
    }
    return *gen_;
  }

  // Returns B_hat_dot and fills alpha_dot.
  Matrix evaluate(const std::vector<Complex>& alphas, const Matrix& b_hat, double t_segment,
                  AlphaDot& ad) {
    FrameGenerator& gen = generator(alphas, t_segment);
    FrameGeometry& geo = *geo_;
    const std::size_t M = specs_.size();
    const Matrix bt = geo.to_frame(b_hat);

    // Liouvillian block in the frame.
    Matrix lt;
    if (gen.right_is_adjoint) {
      lt = hermitian_part_sum(gen.left_group.apply_left(bt));
    } else {
      lt = gen.left_group.apply_left(bt) + gen.right_group.apply_right(bt);
    }
    std::vector<Matrix> right_b(gen.sandwich.size());
    for (std::size_t p = 0; p < gen.sandwich.size(); ++p) {
      const SandwichTerm& s = gen.sandwich[p];
      const Matrix ab = s.left.apply_left(bt);
      lt += s.coeff * s.right.apply_right(ab);
      right_b[p] = s.right.apply_left(bt);
    }

    ad = AlphaDot{std::vector<Complex>(M, 0.0), std::vector<bool>(M, true),
                  std::vector<Complex>(M, 0.0), std::vector<double>(M, 0.0)};
    Matrix tau_b = Matrix::Zero(bt.rows(), bt.cols());
    bool moving = false;
    if (!config_.freeze_alpha) {
      GateStatus gs = gate_status(geo, bt, config_.epsilon_alpha);
      if (!latched_.empty()) {
        for (std::size_t k = 0; k < M; ++k) gs.open[k] = latched_[k] && gs.denominators[k] != Complex(0.0);
      }
      ad.denominators = gs.denominators;
      ad.thresholds = gs.thresholds;
      for (std::size_t k = 0; k < M; ++k) {
        if (!gs.open[k]) continue;
        Complex num = trace_of_product(gen.left_force[k].apply_left(bt), bt);
        for (std::size_t p = 0; p < gen.sandwich.size(); ++p) {
          const SandwichTerm& s = gen.sandwich[p];
          if (s.force[k].empty()) continue;
          num += s.coeff * trace_of_product(s.force[k].apply_left(bt), right_b[p]);
        }
        ad.values[k] = num / gs.denominators[k];
        ad.frozen[k] = false;
        if (ad.values[k] != Complex(0.0)) {
          tau_b += ad.values[k] * apply_mode_factor(geo.mode(k).tau, geo.dims(), k, bt);
          moving = true;
        }
      }
    }
    if (moving) {
      if (gen.right_is_adjoint) {
        lt -= hermitian_part_sum(tau_b);
      } else {
        lt -= tau_b;
        // B tau† = (tau B†)†
        Matrix tb_dag = Matrix::Zero(bt.rows(), bt.cols());
        const Matrix bt_dag = bt.adjoint();
        for (std::size_t k = 0; k < M; ++k) {
          if (ad.values[k] == Complex(0.0)) continue;
          tb_dag += ad.values[k] * apply_mode_factor(geo.mode(k).tau, geo.dims(), k, bt_dag);
        }
        lt -= tb_dag.adjoint();
      }
    }
    return geo.from_frame(lt);
  }

  const std::vector<LadderBasisSpec>& specs() const { return specs_; }
  const EngineConfig& config() const { return config_; }

  /// Holds the gate decision fixed across the stages of one step; an empty
  /// latch re-tests the threshold on every evaluation.
  void latch_gate(std::vector<bool> open) { latched_ = std::move(open); }

 private:
  std::vector<LadderBasisSpec> specs_;
  const ModelSpec& model_;
  EngineConfig config_;
  std::vector<int> extra_;
  std::unique_ptr<FrameGeometry> geo_;
  std::vector<Complex> geo_alphas_;
  std::unique_ptr<FrameGenerator> gen_;
  double gen_t_ = 0.0;
  std::vector<bool> latched_;
};

}  // namespace

RhsResult evaluate_rhs(const VariationalState& state, const std::vector<LadderBasisSpec>& specs,
                       const ModelSpec& model, const EngineConfig& config) {
  config.validate();
  model.validate();
  check_shapes(specs, model);
  FrameRhs rhs(specs, model, config);
  const RealVector lam = ladder_scale(specs);
  if (static_cast<std::size_t>(state.B.rows()) != static_cast<std::size_t>(lam.size())) {
    throw std::invalid_argument("coefficient matrix does not match the basis dimension");
  }
  RhsResult out;
  const Matrix b_hat_dot = rhs.evaluate(state.alphas, scale_both(state.B, lam, lam), state.t, out.alpha_dot);
  out.B_dot = unscale(b_hat_dot, lam);
  return out;
}

// ---------------------------------------------------------------------------
// Integration loop.
// ---------------------------------------------------------------------------

Trajectory evolve(const VariationalState& state0, const ModelSpec& model,
                  const std::vector<LadderBasisSpec>& specs, const EngineConfig& config, double t_end,
                  const std::vector<double>& sample_times, const EvolveOptions& options) {
  config.validate();
  model.validate();
  check_shapes(specs, model);
  const std::size_t M = specs.size();
  if (state0.alphas.size() != M) throw std::invalid_argument("initial state has wrong number of alphas");
  const RealVector lam = ladder_scale(specs);
  const Eigen::Index D = lam.size();
  if (state0.B.rows() != D || state0.B.cols() != D) {
    throw std::invalid_argument("initial B does not match the basis dimension");
  }
  const double t0 = state0.t;
  for (double s : sample_times) {
    if (s < t0 || s > t_end) throw std::invalid_argument("sample time outside the integration window");
  }
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > sample_times[i - 1])) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }

  FrameRhs rhs(specs, model, config);
  const Eigen::Index n_alpha = static_cast<Eigen::Index>(M);
  auto pack = [&](const std::vector<Complex>& a, const Matrix& b_hat) {
    Vector y(n_alpha + D * D);
    for (std::size_t k = 0; k < M; ++k) y(static_cast<Eigen::Index>(k)) = a[k];
    y.segment(n_alpha, D * D) = Eigen::Map<const Vector>(b_hat.data(), D * D);
    return y;
  };
  auto unpack_alphas = [&](const Vector& y) {
    std::vector<Complex> a(M);
    for (std::size_t k = 0; k < M; ++k) a[k] = y(static_cast<Eigen::Index>(k));
    return a;
  };
  auto unpack_b = [&](const Vector& y) {
    return Matrix(Eigen::Map<const Matrix>(y.data() + n_alpha, D, D));
  };

  // Absolute tolerance on B_hat follows the natural scale 1 / prod_k S_hat_k(0,0).
  double s00 = 1.0;
  {
    FrameGeometry& geo = rhs.geometry(state0.alphas);
    for (std::size_t k = 0; k < M; ++k) s00 *= std::abs(geo.mode(k).s_hat(0, 0));
  }
  RealVector atol_scale = RealVector::Constant(n_alpha + D * D, 1.0 / s00);
  atol_scale.head(n_alpha).setOnes();

  IntegratorOptions iopts{config.rtol, config.atol, config.max_step, 5'000'000};
  Dopri5 solver(iopts, atol_scale);

  Trajectory traj;
  traj.gate_open_times.assign(M, {});
  std::vector<bool> gate_prev(M, false);
  bool gate_init = false;

  auto post_step = [&](double t, Vector& y) {
    const auto a = unpack_alphas(y);
    Matrix b_hat = unpack_b(y);
    if (config.symmetrize_B) b_hat = 0.5 * (b_hat + b_hat.adjoint()).eval();
    FrameGeometry& geo = rhs.geometry(a);
    const Complex tr = geo.trace_s(b_hat);
    traj.max_step_trace_drift = std::max(traj.max_step_trace_drift, std::abs(tr - 1.0));
    if (config.renormalize_trace && tr.real() > 0.0) b_hat /= tr.real();
    if (!config.freeze_alpha) {
      const GateStatus gs = gate_status(geo, geo.to_frame(b_hat), config.epsilon_alpha);
      for (std::size_t k = 0; k < M; ++k) {
        if (gate_init && gs.open[k] && !gate_prev[k]) traj.gate_open_times[k].push_back(t);
        gate_prev[k] = gs.open[k];
      }
      gate_init = true;
      // A gate switching inside a step makes the right-hand side discontinuous
      // and the error control chatter; switch only at accepted steps.
      rhs.latch_gate(gs.open);
    }
    y = pack(a, b_hat);
  };

  auto record = [&](double t, const Vector& y) {
    const auto a = unpack_alphas(y);
    const Matrix b_hat = unpack_b(y);
    FrameGeometry& geo = rhs.geometry(a);
    SampleDiagnostics diag;
    diag.trace = geo.trace_s(b_hat).real();
    const double bn = b_hat.norm();
    diag.hermiticity_defect = bn > 0.0 ? (b_hat - b_hat.adjoint()).norm() / bn : 0.0;
    const Matrix bt = geo.to_frame(b_hat);
    if (static_cast<std::size_t>(D) <= options.eigen_diagnostic_max_dim) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (bt + bt.adjoint()), Eigen::EigenvaluesOnly);
      diag.min_eigenvalue = es.eigenvalues().minCoeff();
    }
    if (config.freeze_alpha) {
      diag.gate_open.assign(M, false);
    } else {
      diag.gate_open = gate_status(geo, bt, config.epsilon_alpha).open;
    }
    for (std::size_t k = 0; k < M; ++k) {
      diag.orthogonality_defect = std::max(diag.orthogonality_defect, geo.mode(k).orthogonality_defect);
    }
    VariationalState st{t, a, unscale(b_hat, lam)};
    traj.times.push_back(t);
    traj.alphas.push_back(a);
    traj.diagnostics.push_back(diag);
    if (options.on_sample) options.on_sample(st, diag);
    if (options.store_states) traj.coefficients.push_back(std::move(st.B));
  };

  // Stop points: samples, schedule breakpoints, and the end of the window.
  std::vector<double> stops(sample_times.begin(), sample_times.end());
  for (double b : model.breakpoints()) {
    if (b > t0 && b < t_end) stops.push_back(b);
  }
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  Vector y = pack(state0.alphas, scale_both(state0.B, lam, lam));
  if (!config.freeze_alpha) {
    FrameGeometry& geo = rhs.geometry(state0.alphas);
    rhs.latch_gate(gate_status(geo, geo.to_frame(scale_both(state0.B, lam, lam)), config.epsilon_alpha).open);
  }
  double t = t0;
  std::size_t next_sample = 0;
  if (!sample_times.empty() && sample_times.front() == t0) {
    record(t0, y);
    next_sample = 1;
  }
  const auto hook = Dopri5::Hook(post_step);
  for (double stop : stops) {
    if (stop <= t) continue;
    const double t_segment = 0.5 * (t + stop);
    const Dopri5::Rhs f = [&](double, const Vector& yy, Vector& dy) {
      AlphaDot ad;
      const auto a = unpack_alphas(yy);
      const Matrix b_dot = rhs.evaluate(a, unpack_b(yy), t_segment, ad);
      dy.resize(yy.size());
      for (std::size_t k = 0; k < M; ++k) dy(static_cast<Eigen::Index>(k)) = ad.values[k];
      dy.segment(n_alpha, D * D) = Eigen::Map<const Vector>(b_dot.data(), D * D);
    };
    solver.advance(f, y, t, stop, hook);
    if (next_sample < sample_times.size() && sample_times[next_sample] == stop) {
      record(stop, y);
      ++next_sample;
    }
  }
  traj.stats = solver.stats();
  return traj;
}

// ---------------------------------------------------------------------------
// Initial states.
// ---------------------------------------------------------------------------

namespace {

Matrix embed_mode(const ModeState& st, const LadderBasisSpec& basis, std::size_t k) {
  basis.validate();
  LadderBasisSpec target{st.amplitude, 0, Sector::Plain};
  std::size_t column = 0;
  double norm2 = 0.0;
  const double b2 = std::norm(st.amplitude);
  switch (st.kind) {
    case ModeState::Kind::Coherent:
      norm2 = std::exp(b2);
      break;
    case ModeState::Kind::EvenCat:
      target.sector = Sector::Z2Cat;
      column = 0;
      norm2 = 4.0 * std::cosh(b2);
      break;
    case ModeState::Kind::OddCat:
      if (st.amplitude == Complex(0.0)) throw BasisError(mode_label(k) + ": odd cat with zero amplitude");
      target.sector = Sector::Z2Cat;
      column = 1;
      norm2 = 4.0 * std::sinh(b2);
      break;
  }
  const auto d = static_cast<Eigen::Index>(basis.dim());
  Matrix B = Matrix::Zero(d, d);
  // Exact embedding when the basis shares the state's displacement and sector.
  if (basis.alpha == st.amplitude && basis.sector == target.sector &&
      !(target.sector == Sector::Z2Cat && st.amplitude == Complex(0.0))) {
    const auto i = static_cast<Eigen::Index>(basis.index(0, static_cast<int>(column)));
    B(i, i) = 1.0 / norm2;
    return B;
  }
  if (target.sector == Sector::Z2Cat && st.amplitude == Complex(0.0)) {
    // Even cat at zero amplitude is the vacuum.
    target.sector = Sector::Plain;
    norm2 = 1.0;
  }
  const Vector v = cross_overlap(basis, target).col(static_cast<Eigen::Index>(column)) / std::sqrt(norm2);
  const ModeGeometry g = build_mode_geometry(basis, 1, 1e-12, k);
  const Vector w = g.S_pinv * v;
  return w * w.adjoint();
}

}  // namespace

VariationalState embed_initial_state(const std::vector<ModeState>& states,
                                     const std::vector<LadderBasisSpec>& specs, double t0) {
  if (states.size() != specs.size()) {
    throw BasisError("got " + std::to_string(states.size()) + " initial mode states for " +
                     std::to_string(specs.size()) + " modes");
  }
  VariationalState out;
  out.t = t0;
  std::vector<Matrix> blocks;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    out.alphas.push_back(specs[k].alpha);
    blocks.push_back(embed_mode(states[k], specs[k], k));
  }
  out.B = kron(blocks);
  return out;
}

Complex physical_trace(const Matrix& B, const std::vector<LadderBasisSpec>& specs) {
  std::vector<Matrix> s;
  for (const auto& sp : specs) s.push_back(build_overlap(sp, 0).restricted());
  const Matrix S = kron(s);
  if (S.rows() != B.rows()) throw std::invalid_argument("coefficient matrix does not match the basis");
  return trace_of_product(B, S);
}

}  // namespace catladder
