// campana: command-line front end.
//
// Exit codes: 0 success; 1 configuration; 2 I/O; 10-19 input validation;
// 20-29 resource caps; 30-39 mathematical preconditions (39 internal or a
// failed verification).

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "campana/campana.hpp"
#include "campana/report.hpp"

using namespace campana;
using report::Envelope;
using report::real_json;
using report::rational_json;

namespace {

#ifndef CAMPANA_DATA_DIR
#define CAMPANA_DATA_DIR ""
#endif

struct Global {
  std::uint64_t seed = 0;
  bool timings = false;
  std::string output;
};

struct FanArgs {
  std::string fan;
  std::vector<unsigned> m;
};

u64 parse_u64(const std::string& text, const char* what) {
  Rational q;
  try {
    q = parse_rational(text);
  } catch (const Error&) {
    throw Error(ErrorKind::ConfigError, std::string(what) + ": cannot parse '" + text + "'");
  }
  if (den(q) != 1 || q < 0 || q > Rational(Integer(UINT64_MAX)))
    throw Error(ErrorKind::ConfigError, std::string(what) + " must be a nonnegative integer, got '" + text + "'");
  return num(q).convert_to<u64>();
}

std::vector<u64> parse_u64_list(const std::vector<std::string>& items, const char* what) {
  std::vector<u64> out;
  for (const auto& s : items) out.push_back(parse_u64(s, what));
  return out;
}

std::string resolve_fan(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  const fs::path bundled = fs::path(CAMPANA_DATA_DIR) / "fans" / (name + ".json");
  if (!std::string(CAMPANA_DATA_DIR).empty() && fs::exists(bundled)) return bundled.string();
  throw Error(ErrorKind::IoError, "no fan file " + name);
}

OrbifoldInstance load(const FanArgs& a, Envelope& env) {
  const std::string path = resolve_fan(a.fan);
  const std::string text = read_text_file(path);
  env.hash_input(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedFan, path + ": " + e.what());
  }
  auto inst = instance_from_json(j);
  if (!a.m.empty()) {
    std::string ms;
    for (auto x : a.m) ms += std::to_string(x) + ",";
    env.hash_input("m=" + ms);
    inst = make_instance(inst.fan, a.m);
  }
  return inst;
}

json index_sets(const std::vector<std::vector<std::size_t>>& sets) {
  json out = json::array();
  for (const auto& s : sets) {
    json e = json::array();
    for (auto i : s) e.push_back(i + 1);
    out.push_back(e);
  }
  return out;
}

const char* verdict_name(Verdict v) { return v == Verdict::Satisfied ? "Satisfied" : "Unresolved"; }

json assumption_json(const AssumptionReport& rep, Envelope& env) {
  json log = json::array();
  for (const auto& e : rep.log) {
    json J = json::array();
    for (auto i : e.J) J.push_back(i + 1);
    log.push_back({{"J", J}, {"resolved", e.resolved}, {"criterion", e.criterion}});
  }
  if (rep.verdict != Verdict::Satisfied) env.warn("AssumptionUnresolved: " + rep.witness);
  return {{"verdict", verdict_name(rep.verdict)},
          {"witness", rep.witness},
          {"s", rep.s},
          {"k", rep.k},
          {"a", to_string(rep.a)},
          {"log", log},
          {"unresolved", index_sets(rep.unresolved)}};
}

json constant_json(const count::LeadingConstant& c) {
  return {{"value", real_json(c.value)},
          {"relative_tail_bound", real_json(c.tail_bound)},
          {"cutoff", c.cutoff},
          {"two_power", to_string(c.two_power)},
          {"alpha", rational_json(c.alpha)},
          {"cone_sum", rational_json(c.cone_sum)},
          {"prod_C", real_json(c.prod_C)},
          {"euler_product", real_json(c.euler_product)}};
}

// ---- fan commands ---------------------------------------------------------

void cmd_validate(const FanArgs& a, Envelope& env) {
  const auto inst = load(a, env);
  const auto rep = validate_fan(inst.fan);
  env.payload() = {{"n", rep.n},
                   {"s", rep.s},
                   {"r", rep.r},
                   {"primitive", rep.primitive},
                   {"smooth", rep.smooth},
                   {"complete", rep.complete},
                   {"m", inst.m},
                   {"L", report::vec_json(inst.L)},
                   {"beta_relation", check_beta_relation(inst)},
                   {"assumption_L", assumption_L(inst)},
                   {"ample", is_ample(inst)},
                   {"minimal_nonfaces", index_sets(minimal_nonfaces(inst.fan))}};
  if (!is_ample(inst)) env.warn("NotAmple: L is not ample; exponent and constant commands will refuse this input");
}

void cmd_lp(const FanArgs& a, Envelope& env) {
  const auto inst = load(a, env);
  const auto e = exponents_a_b(inst);
  const auto dual = dual_exponent_a(inst);
  if (dual.optimum != e.a) throw Error(ErrorKind::Internal, "primal and dual optima differ");
  json verts = json::array();
  for (const auto& v : e.primal.optimal_vertices) verts.push_back(report::vec_json(v));
  env.payload() = {{"a", to_string(e.a)},
                   {"b", e.b},
                   {"dual_optimum", to_string(dual.optimum)},
                   {"optimal_face_dim", e.primal.optimal_face_dim},
                   {"witness_vertex", report::vec_json(e.primal.witness_vertex)},
                   {"optimal_vertices", verts},
                   {"dual_witness", report::vec_json(dual.witness_vertex)}};
}

void cmd_alpha(const FanArgs& a, Envelope& env) {
  const auto inst = load(a, env);
  json per = json::array();
  for (Index c = 0; c < inst.fan.max_cones.size(); ++c) per.push_back(to_string(alpha_L_at(inst, c)));
  env.payload() = {{"alpha_L", rational_json(alpha_L(inst))},
                   {"per_cone", per},
                   {"cone_sum", rational_json(cone_weight_sum(inst))},
                   {"slice_constant", rational_json(toric_slice_constant(inst))}};
}

void cmd_assumption(const FanArgs& a, Envelope& env) {
  const auto inst = load(a, env);
  env.payload() = assumption_json(check_assumption_toric(inst), env);
}

struct SliceArgs {
  std::vector<std::string> normal, levels;
  std::size_t axis = 0;
  std::string out;
};

void cmd_slice(const FanArgs& a, const SliceArgs& sa, Envelope& env) {
  const auto inst = load(a, env);
  const auto p = build_tilde_P(inst);
  Vec normal = varpi_vector(inst);
  if (!sa.normal.empty()) {
    if (sa.normal.size() != inst.s()) throw Error(ErrorKind::ConfigError, "need one normal entry per ray");
    normal.clear();
    for (const auto& x : sa.normal) normal.push_back(parse_rational(x));
  }
  for (const auto& x : sa.normal) env.hash_input("normal=" + x);
  for (const auto& x : sa.levels) env.hash_input("level=" + x);
  env.hash_input("axis=" + std::to_string(sa.axis));
  report::Table t{{"delta", "volume", "residual"}, {}};
  json rows = json::array();
  if (!sa.levels.empty()) {
    const Rational top = lp_maximize(p, normal).optimum;
    for (const auto& x : sa.levels) {
      const Rational level = parse_rational(x);
      const Rational vol = slice_volume(p, normal, level, sa.axis);
      rows.push_back({{"level", to_string(level)}, {"delta", to_string(top - level)}, {"volume", rational_json(vol)}});
      t.rows.push_back({to_string(top - level), report::format_real(to_real(vol)), ""});
    }
    env.payload() = {{"max", rational_json(top)}, {"axis", sa.axis}, {"rows", rows}};
  } else {
    const auto s = slice_volume_series(p, normal, sa.axis);
    std::size_t ri = 0;
    for (std::size_t i = 0; i < s.deltas.size(); ++i) {
      std::optional<Real> res;
      if (s.retained[i] && s.volumes[i] > 0 && ri < s.residuals.size()) res = s.residuals[ri++];
      rows.push_back({{"delta", to_string(s.deltas[i])},
                      {"volume", rational_json(s.volumes[i])},
                      {"retained", static_cast<bool>(s.retained[i])},
                      {"residual", res ? real_json(*res) : json(nullptr)}});
      t.rows.push_back({report::format_real(to_real(s.deltas[i])), report::format_real(to_real(s.volumes[i])),
                        res ? report::format_real(*res) : ""});
    }
    json pl = {{"a", to_string(s.a)},
               {"k", s.k},
               {"axis", s.measure_axis},
               {"predicted_exponent", s.predicted_exponent},
               {"fitted_exponent", real_json(s.fitted_exponent)},
               {"fitted_coefficient", real_json(s.fitted_coefficient)},
               {"rows", rows}};
    if (sa.normal.empty()) {
      Rational scale = 1;
      for (Index i = 0; i < inst.s(); ++i)
        if (i != sa.axis) scale *= normal[i];
      pl["weighted_coefficient"] = real_json(s.fitted_coefficient * to_real(scale));
      pl["closed_form"] = rational_json(toric_slice_constant(inst));
    }
    env.payload() = pl;
    if (std::abs(s.fitted_exponent - s.predicted_exponent) > 0.05L)
      env.warn("SliceFit: fitted exponent differs from the LP exponent by more than 0.05");
  }
  if (!sa.out.empty()) report::write_csv(sa.out, t);
}

void cmd_count(const FanArgs& a, const std::string& bound, u64 cutoff, Envelope& env) {
  const auto inst = load(a, env);
  const u64 B = parse_u64(bound, "--bound");
  env.hash_input("B=" + std::to_string(B));
  env.hash_input("cutoff=" + std::to_string(cutoff));
  const u64 cap = report::work_cap(count::detail::default_work_cap());
  Integer N;
  {
    report::ScopedTimer timer(env, "count");
    N = count::count_N(inst, B, cap);
  }
  json pl = {{"B", B}, {"N", to_string(N)}, {"s", inst.s()}, {"r", inst.r()}, {"m", inst.m}};
  if (is_ample(inst) && B >= 2) {
    const auto c = count::leading_constant(inst, cutoff);
    const Real lb = std::log(static_cast<Real>(B));
    const Real pred = c.value * static_cast<Real>(B) * std::pow(lb, static_cast<Real>(inst.r()) - 1);
    pl["constant"] = real_json(c.value);
    pl["prediction"] = real_json(pred);
    pl["ratio"] = real_json(to_real(Rational(N)) / pred);
    const auto asum = check_assumption_toric(inst);
    if (asum.verdict != Verdict::Satisfied) env.warn("AssumptionUnresolved: " + asum.witness);
  } else if (!is_ample(inst)) {
    env.warn("NotAmple: no prediction for a non-ample L");
  }
  env.payload() = pl;
}

void cmd_constant(const FanArgs& a, u64 cutoff, Envelope& env) {
  const auto inst = load(a, env);
  env.hash_input("cutoff=" + std::to_string(cutoff));
  const auto c = count::leading_constant(inst, cutoff);
  const auto e = exponents_a_b(inst);
  json pl = constant_json(c);
  pl["a"] = to_string(e.a);
  pl["b"] = e.b;
  pl["prediction_form"] = "c B^a (log B)^(b-1)";
  const auto asum = check_assumption_toric(inst);
  if (asum.verdict != Verdict::Satisfied) env.warn("AssumptionUnresolved: " + asum.witness);
  if (c.tail_bound > 1e-3L) env.warn("ConstantTail: relative tail bound exceeds 1e-3; raise --cutoff");
  env.payload() = pl;
}

void cmd_asymptotic(const FanArgs& a, const std::vector<std::string>& bounds_text, u64 cutoff,
                    const std::string& out, Envelope& env) {
  const auto inst = load(a, env);
  const auto bounds = parse_u64_list(bounds_text, "--bounds");
  for (auto B : bounds) env.hash_input("B=" + std::to_string(B));
  env.hash_input("cutoff=" + std::to_string(cutoff));
  const u64 cap = report::work_cap(count::detail::default_work_cap());
  count::AsymptoticReport rep;
  {
    report::ScopedTimer timer(env, "asymptotic");
    rep = count::asymptotic_report(inst, bounds, cutoff, cap);
  }
  report::Table t{{"B", "N", "prediction", "ratio"}, {}};
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"B", r.B}, {"N", to_string(r.N)}, {"prediction", real_json(r.prediction)}, {"ratio", real_json(r.ratio)}});
    t.rows.push_back({std::to_string(r.B), to_string(r.N), report::format_real(r.prediction), report::format_real(r.ratio)});
  }
  json pl = {{"constant", constant_json(rep.constant)},
             {"a", to_string(rep.exponents.a)},
             {"b", rep.exponents.b},
             {"assumption", assumption_json(rep.assumption, env)},
             {"rows", rows},
             {"monotone_approach", rep.monotone_approach}};
  if (rep.limit) {
    pl["theta"] = real_json(rep.theta);
    pl["extrapolated_ratio"] = real_json(*rep.limit);
  }
  if (!rep.rows.empty() && !rep.monotone_approach) env.warn("NonMonotone: |ratio - 1| is not monotone along the bounds");
  env.payload() = pl;
  if (!out.empty()) report::write_csv(out, t);
}

// ---- mfull ----------------------------------------------------------------

void cmd_mfull_count(unsigned m, const std::string& bound, u64 d, Envelope& env) {
  const u64 B = parse_u64(bound, "--bound");
  env.hash_input("m=" + std::to_string(m) + ";B=" + std::to_string(B) + ";d=" + std::to_string(d));
  if (m == 0) throw Error(ErrorKind::ConfigError, "m must be positive");
  mfull::require_squarefree(d);
  const u64 F = mfull::count_F(m, B, d, report::work_cap(mfull::detail::default_cap()));
  const Real c = mfull::c_md(m, d);
  const Real main = c * std::pow(static_cast<Real>(B), Real(1) / m);
  env.payload() = {{"m", m}, {"B", B}, {"d", d}, {"F", F}, {"c_md", real_json(c)},
                   {"main_term", real_json(main)}, {"ratio", real_json(main > 0 ? F / main : 0)}};
}

void cmd_mfull_constants(unsigned m, u64 cutoff, unsigned mu_max, Envelope& env) {
  env.hash_input("m=" + std::to_string(m) + ";cutoff=" + std::to_string(cutoff) + ";mu=" + std::to_string(mu_max));
  if (m == 0) throw Error(ErrorKind::ConfigError, "m must be positive");
  if (cutoff < 2) throw Error(ErrorKind::ConfigError, "--cutoff must be at least 2");
  const auto plain = mfull::constant_C_m(m, cutoff);
  const auto acc = mfull::constant_C_m_accelerated(m, cutoff);
  json pl = {{"m", m},
             {"cutoff", cutoff},
             {"kappa", m == 1 ? "0" : "1/" + std::to_string(m + 1)},
             {"C_m", real_json(acc.value)},
             {"C_m_tail_bound", real_json(acc.tail_bound)},
             {"C_m_truncated", real_json(plain.value)},
             {"C_m_truncated_tail_bound", real_json(plain.tail_bound)}};
  if (m >= 2) {
    json coeffs = json::array();
    if (mu_max == 0) mu_max = 4 * m;
    const auto a = mfull::a_m_coefficients(m, mu_max);
    for (std::size_t mu = m + 1; mu < a.size(); ++mu) coeffs.push_back(to_string(a[mu]));
    pl["a_coefficients_from"] = m + 1;
    pl["a_coefficients"] = coeffs;
    pl["series_radius"] = real_json(mfull::series_radius(m));
  }
  const auto K = mfull::K_m(m);
  pl["K_m"] = K ? real_json(*K) : json(nullptr);
  if (!K) env.warn("KmDivergent: the coefficient series diverges at 2^(-kappa_m); K_m is unavailable");
  env.payload() = pl;
}

void cmd_mfull_verify(unsigned m, u64 d, std::optional<u64> p, const std::string& bound, Envelope& env) {
  const u64 B = parse_u64(bound, "--bound");
  env.hash_input("m=" + std::to_string(m) + ";d=" + std::to_string(d) + ";B=" + std::to_string(B));
  mfull::require_squarefree(d);
  std::vector<u64> ps = p ? std::vector<u64>{*p} : prime_divisors(d);
  if (ps.empty()) throw Error(ErrorKind::InvalidArgument, "d = 1 has no prime divisor to peel");
  json checks = json::array();
  bool all = true;
  for (u64 q : ps) {
    const auto a = mfull::verify_peeling(m, d, q, B);
    const auto b = mfull::verify_peeling_mu_form(m, d, q, B);
    all = all && a.holds() && b.holds();
    checks.push_back({{"p", q},
                      {"peeling", {{"lhs", to_string(a.lhs)}, {"rhs", to_string(a.rhs)}, {"holds", a.holds()}}},
                      {"moebius_form", {{"lhs", to_string(b.lhs)}, {"rhs", to_string(b.rhs)}, {"holds", b.holds()}}}});
  }
  env.payload() = {{"m", m}, {"d", d}, {"B", B}, {"checks", checks}, {"all_hold", all}};
  if (!all) throw Error(ErrorKind::Internal, "identity check failed");
}

// ---- hyperbola ------------------------------------------------------------

/// "unit" or "mfull:m1,m2,...[:d1,d2,...]".
hyperbola::MFullIndicator parse_preset(const std::string& preset, std::size_t arity) {
  auto split = [](const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_u64(item, "preset"));
    return out;
  };
  if (preset == "unit") return hyperbola::MFullIndicator(std::vector<unsigned>(arity, 1), {});
  if (preset.rfind("mfull:", 0) == 0) {
    const std::string rest = preset.substr(6);
    const auto colon = rest.find(':');
    std::vector<unsigned> m;
    for (auto x : split(rest.substr(0, colon))) m.push_back(static_cast<unsigned>(x));
    std::vector<u64> d = colon == std::string::npos ? std::vector<u64>{} : split(rest.substr(colon + 1));
    if (m.size() != arity) throw Error(ErrorKind::ConfigError, "preset arity differs from the system");
    return hyperbola::MFullIndicator(m, d);
  }
  throw Error(ErrorKind::ConfigError, "unknown function preset '" + preset + "'");
}

std::pair<hyperbola::MFullIndicator, hyperbola::BoxConstraintSystem> load_system(const std::string& path,
                                                                                   Envelope& env) {
  const std::string text = read_text_file(path);
  env.hash_input(text);
  try {
    const json j = json::parse(text);
    hyperbola::BoxConstraintSystem sys;
    for (const auto& row : j.at("alpha")) {
      std::vector<Rational> r;
      for (const auto& x : row) r.push_back(rational_from_json(x));
      sys.alpha.push_back(std::move(r));
    }
    if (j.contains("b")) for (const auto& x : j["b"]) sys.b.push_back(rational_from_json(x));
    sys.validate();
    const std::string f = j.value("f", std::string("unit"));
    return {parse_preset(f, sys.arity()), sys};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  }
}

void hyperbola_payload(const hyperbola::MFullIndicator& f, const hyperbola::BoxConstraintSystem& sys, u64 B,
                       bool exact, bool boxes, Envelope& env) {
  env.hash_input("B=" + std::to_string(B) + (exact ? ";exact" : "") + (boxes ? ";boxes" : ""));
  if (B < 3) throw Error(ErrorKind::ConfigError, "--bound must be at least 3");
  const auto mt = hyperbola::hyperbola_main_term(f, sys, static_cast<Real>(B));
  env.warn_all(mt.warnings);
  json pl = {{"B", B},
             {"a", to_string(mt.a)},
             {"k", mt.k},
             {"c_P", real_json(mt.c_P)},
             {"C_M", real_json(f.C_M())},
             {"C5", rational_json(hyperbola::constant_C5(sys, f.varpi()))},
             {"main_term", real_json(mt.value)},
             {"error_scale", real_json(mt.error_scale)},
             {"assumption", verdict_name(mt.assumption.verdict)}};
  if (exact) {
    const Real S = hyperbola::exact_S_f(f, sys, B, 1, report::work_cap(100'000'000ull));
    pl["exact_sum"] = real_json(S);
    pl["ratio"] = real_json(S / mt.value);
  }
  if (boxes) {
    const auto sw = hyperbola::sandwich(f, sys, B, hyperbola::BoxParameters{});
    pl["sandwich"] = {{"lower", to_string(sw.lower)},
                      {"exact", to_string(sw.exact)},
                      {"upper", to_string(sw.upper)},
                      {"boxes_minus", sw.boxes_minus},
                      {"boxes_plus", sw.boxes_plus},
                      {"holds", sw.holds()}};
    if (!sw.holds()) env.warn("SandwichViolated: box sums do not bracket the exact sum");
  }
  env.payload() = pl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting Campana points on toric orbifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Seed recorded in the report");
  app.add_flag("--timings", g.timings, "Include wall-clock timings (output is then not byte-stable)");
  app.add_option("-o,--output", g.output, "Write the JSON report here instead of stdout");

  FanArgs fa;
  auto fan_opts = [&](CLI::App* c) {
    c->add_option("--fan", fa.fan, "Fan JSON file, or a bundled name such as p2")->required();
    c->add_option("--m", fa.m, "Multiplicities, overriding the file")->delimiter(',');
  };
  std::function<void(Envelope&)> run;

  auto* validate = app.add_subcommand("validate", "Check smoothness and completeness");
  fan_opts(validate);
  validate->callback([&] { run = [&](Envelope& e) { cmd_validate(fa, e); }; });

  auto* lp = app.add_subcommand("lp", "Exponents a, b by primal and dual LP");
  fan_opts(lp);
  lp->callback([&] { run = [&](Envelope& e) { cmd_lp(fa, e); }; });

  auto* alpha = app.add_subcommand("alpha", "alpha(L) and the slice constant");
  fan_opts(alpha);
  alpha->callback([&] { run = [&](Envelope& e) { cmd_alpha(fa, e); }; });

  auto* assumption = app.add_subcommand("assumption", "Run the polytope assumption checker");
  fan_opts(assumption);
  assumption->callback([&] { run = [&](Envelope& e) { cmd_assumption(fa, e); }; });

  SliceArgs sa;
  auto* slice = app.add_subcommand("slice", "Slice volumes of the toric polytope");
  fan_opts(slice);
  slice->add_option("--normal", sa.normal, "Slice normal (default varpi)")->delimiter(',');
  slice->add_option("--levels", sa.levels, "Explicit levels instead of the default ladder")->delimiter(',');
  slice->add_option("--axis", sa.axis, "Coordinate forgotten by the projection measure (0-based)");
  slice->add_option("--out", sa.out, "CSV path (delta, volume, residual)");
  slice->callback([&] { run = [&](Envelope& e) { cmd_slice(fa, sa, e); }; });

  std::string bound = "10000";
  u64 cutoff = 100000;
  auto* count = app.add_subcommand("count", "Exact N(B) and its ratio to the prediction");
  fan_opts(count);
  count->add_option("--bound,-B", bound, "Height bound")->required();
  count->add_option("--cutoff", cutoff, "Prime cutoff for the constant");
  count->callback([&] { run = [&](Envelope& e) { cmd_count(fa, bound, cutoff, e); }; });

  auto* constant = app.add_subcommand("constant", "Leading constant c");
  fan_opts(constant);
  constant->add_option("--cutoff", cutoff, "Prime cutoff");
  constant->callback([&] { run = [&](Envelope& e) { cmd_constant(fa, cutoff, e); }; });

  std::vector<std::string> bounds;
  std::string csv_out;
  auto* asym = app.add_subcommand("asymptotic", "N(B) against the prediction along a list of bounds");
  fan_opts(asym);
  asym->add_option("--bounds", bounds, "Ascending bounds")->delimiter(',');
  asym->add_option("--cutoff", cutoff, "Prime cutoff");
  asym->add_option("--out", csv_out, "CSV path (B, N, prediction, ratio)");
  asym->callback([&] { run = [&](Envelope& e) { cmd_asymptotic(fa, bounds, cutoff, csv_out, e); }; });

  unsigned m = 2;
  u64 d = 1;
  unsigned mu_max = 0;
  std::optional<u64> prime;
  auto* mf = app.add_subcommand("mfull", "m-full integers");
  mf->require_subcommand(1);
  auto* mf_count = mf->add_subcommand("count", "F_m(B, d)");
  mf_count->add_option("--m", m)->required();
  mf_count->add_option("--bound,-B", bound)->required();
  mf_count->add_option("--d", d, "Squarefree divisor");
  mf_count->callback([&] { run = [&](Envelope& e) { cmd_mfull_count(m, bound, d, e); }; });
  auto* mf_const = mf->add_subcommand("constants", "C_m, kappa_m, K_m, a_m(mu)");
  mf_const->add_option("--m", m)->required();
  mf_const->add_option("--cutoff", cutoff);
  mf_const->add_option("--mu-max", mu_max, "Last coefficient index (default 4m)");
  mf_const->callback([&] { run = [&](Envelope& e) { cmd_mfull_constants(m, cutoff, mu_max, e); }; });
  auto* mf_verify = mf->add_subcommand("verify", "Exact peeling identities");
  mf_verify->add_option("--m", m)->required();
  mf_verify->add_option("--d", d)->required();
  mf_verify->add_option("--p", prime, "Prime divisor of d (default: each one)");
  mf_verify->add_option("--bound,-B", bound)->required();
  mf_verify->callback([&] { run = [&](Envelope& e) { cmd_mfull_verify(m, d, prime, bound, e); }; });

  std::string system;
  bool exact = false, boxes = false;
  auto* hy = app.add_subcommand("hyperbola", "Generalised hyperbola method");
  hy->require_subcommand(1);
  auto* demo = hy->add_subcommand("demo", "Divisor-sum example: y1 y2 <= B");
  demo->add_option("--bound,-B", bound)->required();
  demo->callback([&] {
    run = [&](Envelope& e) {
      auto [f, sys] = hyperbola::dirichlet_preset();
      hyperbola_payload(f, sys, parse_u64(bound, "--bound"), true, true, e);
    };
  });
  auto* est = hy->add_subcommand("estimate", "Main term for a constraint system file");
  est->add_option("--system", system, "JSON with alpha, b and f")->required()->check(CLI::ExistingFile);
  est->add_option("--bound,-B", bound)->required();
  est->add_flag("--exact", exact, "Also compute the exact sum");
  est->add_flag("--boxes", boxes, "Also compute the box sandwich");
  est->callback([&] {
    run = [&](Envelope& e) {
      auto [f, sys] = load_system(system, e);
      hyperbola_payload(f, sys, parse_u64(bound, "--bound"), exact, boxes, e);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string command;
  for (auto* c = app.get_subcommands().front(); c;) {
    command += (command.empty() ? "" : " ") + c->get_name();
    auto subs = c->get_subcommands();
    c = subs.empty() ? nullptr : subs.front();
  }
  Envelope env(command, g.seed);
  env.enable_timings(g.timings);
  env.hash_input(command);
  try {
    {
      report::ScopedTimer total(env, "total");
      run(env);
    }
    const std::string text = env.dump();
    if (g.output.empty())
      std::cout << text;
    else
      report::write_text(g.output, text);
    for (const auto& w : env.warnings()) std::cerr << "warning: " << w << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return exit_code(ErrorKind::Internal);
  }
}
