#pragma once

#include <vector>

#include "campana/assumption.hpp"
#include "campana/toric_fan.hpp"

namespace campana {

inline Vec varpi_vector(const OrbifoldInstance& inst) {
  Vec w;
  for (Index i = 0; i < inst.s(); ++i) w.push_back(inst.varpi(i));
  return w;
}

/// P~ = {t >= 0, sum_i alpha_{i,sigma} t_i <= 1 for every cone}.
inline RationalPolytope build_tilde_P(const OrbifoldInstance& inst) {
  if (!assumption_L(inst)) throw Error(ErrorKind::UnboundedPolytope, "some D_i has no positive alpha_{i,sigma}");
  const std::size_t s = inst.s();
  Mat a;
  Vec b;
  for (Index i = 0; i < s; ++i) {
    Vec row(s, Rational(0));
    row[i] = -1;
    a.push_back(row);
    b.push_back(0);
  }
  for (const auto& cd : all_cone_data(inst)) {
    a.push_back(cd.alpha);
    b.push_back(1);
  }
  return RationalPolytope(s, a, b);
}

/// max of sum t_i / m_i over P~; no ampleness requirement.
inline LPSolution primal_exponent(const OrbifoldInstance& inst) {
  return lp_maximize(build_tilde_P(inst), varpi_vector(inst));
}

struct Exponents {
  Rational a;
  long b = 0;
  LPSolution primal;
};

inline Exponents exponents_a_b(const OrbifoldInstance& inst) {
  if (!is_ample(inst)) throw Error(ErrorKind::NotAmple, "L is not ample");
  Exponents e;
  e.primal = primal_exponent(inst);
  e.a = e.primal.optimum;
  e.b = e.primal.optimal_face_dim + 1;
  return e;
}

/// min sum lambda_sigma, lambda >= 0, sum_sigma lambda_sigma alpha_{i,sigma} >= 1/m_i.
/// optimum holds the minimum and witness_vertex the lambda.
inline LPSolution dual_exponent_a(const OrbifoldInstance& inst) {
  const auto cds = all_cone_data(inst);
  const std::size_t c = cds.size(), s = inst.s();
  Mat a;
  Vec b;
  for (std::size_t j = 0; j < c; ++j) {
    Vec row(c, Rational(0));
    row[j] = -1;
    a.push_back(row);
    b.push_back(0);
  }
  for (Index i = 0; i < s; ++i) {
    Vec row(c);
    for (std::size_t j = 0; j < c; ++j) row[j] = -cds[j].alpha[i];
    a.push_back(row);
    b.push_back(-inst.varpi(i));
  }
  const auto res = simplex_solve(a, b, {}, {}, Vec(c, Rational(-1)));
  if (res.status != LPStatus::Optimal) throw Error(ErrorKind::Infeasible, "dual exponent program infeasible");
  LPSolution sol;
  sol.optimum = -res.optimum;
  sol.witness_vertex = res.x;
  sol.dual_witness = res.y_ineq;
  return sol;
}

/// alpha(L) computed in the chart of one cone: the volume of
/// eff* cut by lambda_L = 1, measure alpha_{i~,sigma}^{-1} prod_{i != i~} dz_i.
inline Rational alpha_L_at(const OrbifoldInstance& inst, Index cone) {
  const ConeData cd = cone_data(inst, cone);
  const std::size_t r = cd.complement.size();
  Mat a;
  Vec b;
  for (std::size_t k = 0; k < r; ++k) {
    Vec row(r, Rational(0));
    row[k] = -1;
    a.push_back(row);
    b.push_back(0);
  }
  for (auto j : cd.sigma) {
    Vec row(r);
    for (std::size_t k = 0; k < r; ++k) row[k] = -cd.beta[cd.complement[k]][j];
    a.push_back(row);
    b.push_back(0);
  }
  Vec lambda(r);
  for (std::size_t k = 0; k < r; ++k) lambda[k] = cd.alpha[cd.complement[k]];
  a.push_back(lambda);
  b.push_back(2);
  const RationalPolytope p(r, a, b);
  if (!is_bounded(p)) throw Error(ErrorKind::NotAmple, "L is not in the interior of the effective cone");
  std::size_t axis = 0;
  while (axis < r && lambda[axis] == 0) ++axis;
  if (axis == r) throw Error(ErrorKind::NotAmple, "L(sigma) vanishes");
  return slice_volume(p, lambda, 1, axis) / lambda[axis];
}

/// alpha(L), checked to agree across all cones.
inline Rational alpha_L(const OrbifoldInstance& inst) {
  const Rational v = alpha_L_at(inst, 0);
  for (Index c = 1; c < inst.fan.max_cones.size(); ++c)
    if (alpha_L_at(inst, c) != v) throw Error(ErrorKind::Internal, "alpha(L) depends on the cone");
  return v;
}

/// alpha(L)/(s-r)! * sum_sigma prod_{Ic} varpi_i: the leading coefficient of
/// the slice volume of P~ in the measure prod_{i != i~} varpi_i dt_i.
inline Rational toric_slice_constant(const OrbifoldInstance& inst) {
  return alpha_L(inst) / detail::factorial(static_cast<unsigned>(inst.s() - inst.r())) * cone_weight_sum(inst);
}

struct ToricSliceSeries {
  SliceVolumeSeries series;
  Real weighted_coefficient = 0;  ///< fitted coefficient in the varpi-weighted measure
  Rational closed_form;           ///< toric_slice_constant
};

inline ToricSliceSeries tilde_slice_series(const OrbifoldInstance& inst, std::size_t measure_axis = 0) {
  ToricSliceSeries out;
  const Vec w = varpi_vector(inst);
  out.series = slice_volume_series(build_tilde_P(inst), w, measure_axis);
  Rational scale = 1;
  for (Index i = 0; i < inst.s(); ++i)
    if (i != measure_axis) scale *= w[i];
  out.weighted_coefficient = out.series.fitted_coefficient * to_real(scale);
  out.closed_form = toric_slice_constant(inst);
  return out;
}

inline AssumptionReport check_assumption_toric(const OrbifoldInstance& inst) {
  return check_assumption_polytopes(build_tilde_P(inst), varpi_vector(inst));
}

}  // namespace campana
