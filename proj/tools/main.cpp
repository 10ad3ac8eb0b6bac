#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rollsym/curvature.hpp"
#include "rollsym/errors.hpp"
#include "rollsym/io.hpp"
#include "rollsym/lie_engine.hpp"
#include "rollsym/nilpotent.hpp"
#include "rollsym/symmetry.hpp"

using namespace rollsym;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitRank = 4;
constexpr int kExitMismatch = 5;

constexpr double kRankGap = 1e4;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
};

json load_config(const Globals& g) {
  if (g.config_path.empty()) return json::object();
  std::ifstream in(g.config_path);
  if (!in) throw InputError("cannot open config '" + g.config_path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
}

std::uint64_t effective_seed(const Globals& g, const json& cfg) {
  if (g.seed) return *g.seed;
  if (cfg.contains("seed")) {
    if (!cfg.at("seed").is_number_unsigned()) throw InputError("'seed' must be a non-negative integer");
    return cfg.at("seed").get<std::uint64_t>();
  }
  return 0;
}

double tolerance(const Globals& g, const json& cfg, const char* key, double fallback) {
  if (g.tol) return *g.tol;
  if (cfg.contains("tolerances") && cfg.at("tolerances").contains(key)) {
    const json& v = cfg.at("tolerances").at(key);
    if (!v.is_number()) throw InputError(std::string("tolerance '") + key + "' must be a number");
    return v.get<double>();
  }
  return fallback;
}

RollingModel load_model(const json& cfg) {
  if (!cfg.contains("M") || !cfg.contains("M_hat")) throw InputError("config needs 'M' and 'M_hat'");
  return RollingModel(space_form_from_json(cfg.at("M")), space_form_from_json(cfg.at("M_hat")));
}

RollingState load_or_sample_state(const RollingModel& model, const json& cfg, Rng& rng) {
  if (cfg.contains("state")) return state_from_json(model, cfg.at("state"));
  return sample_state(model, rng);
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.out);
  if (!os) throw InputError("cannot write '" + g.out + "'");
  os << text;
}

void emit(const Globals& g, const json& report) { emit(g, report.dump(2) + "\n"); }

json stats_json(const std::vector<double>& v) {
  double mx = 0.0, sum = 0.0;
  for (double x : v) {
    mx = std::max(mx, x);
    sum += x;
  }
  return json{{"max", mx}, {"mean", v.empty() ? 0.0 : sum / v.size()}, {"count", v.size()}};
}

Vec unit_random(int n, Rng& rng) {
  Vec v = gaussian_vector(n, rng);
  return v / v.norm();
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Globals& g, double step, bool project) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  Rng rng(seed);
  const RollingModel model = load_model(cfg);
  const RollingState q0 = load_or_sample_state(model, cfg, rng);
  const double tol = tolerance(g, cfg, "isometry", 1e-7);
  if (!cfg.contains("path")) throw InputError("config needs a 'path'");
  const json& p = cfg.at("path");
  const std::string type = p.value("type", std::string("geodesic"));

  std::unique_ptr<Path> path;
  if (type == "geodesic") {
    if (!p.contains("direction") || !p.contains("length")) throw InputError("geodesic path needs 'direction' and 'length'");
    const Vec dir = model.M.from_frame(q0.x, vec_from_json(p.at("direction")));
    path = std::make_unique<GeodesicPath>(
        GeodesicPath::from_direction(model.M, q0.x, dir, p.at("length").get<double>(), step));
  } else if (type == "samples") {
    if (!p.contains("t") || !p.contains("points")) throw InputError("sampled path needs 't' and 'points'");
    std::vector<double> t = p.at("t").get<std::vector<double>>();
    std::vector<Vec> pts;
    for (const json& row : p.at("points")) pts.push_back(vec_from_json(row));
    path = std::make_unique<SampledPath>(model.M, std::move(t), std::move(pts));
  } else {
    throw InputError("unknown path type '" + type + "'");
  }

  RollOptions opts;
  opts.step = step;
  opts.project = project;
  const RollingCurve curve = roll_along(model, q0, *path, opts);
  const double residual = curve.max_isometry_residual();

  if (g.format == "csv") {
    std::ostringstream os;
    write_trajectory_csv(os, curve);
    emit(g, os.str());
  } else {
    json report{{"command", "simulate"},
                {"seed", seed},
                {"tolerances", {{"isometry", tol}}},
                {"step", step},
                {"samples", curve.states.size()},
                {"max_isometry_residual", residual},
                {"min_det", curve.min_det()},
                {"initial_state", to_json(curve.states.front())},
                {"final_state", to_json(curve.states.back())}};
    emit(g, report);
  }
  (g.out.empty() ? std::cerr : std::cout) << "max_isometry_residual=" << residual << "\n";
  return residual < tol && curve.min_det() > 0 ? kExitOk : kExitAssert;
}

// ---------------------------------------------------------------- growth

int cmd_growth(const Globals& g, std::optional<int> depth_flag) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  Rng rng(seed);
  const RollingModel model = load_model(cfg);
  const RollingState q = load_or_sample_state(model, cfg, rng);
  const int depth = depth_flag ? *depth_flag : cfg.value("depth", 3);
  FlagOptions opts;
  opts.tol = tolerance(g, cfg, "rank", 1e-8);
  const FlagReport rep = flag_ranks(model, q, depth, opts);

  json sv = json::array();
  for (const Vec& s : rep.singular_values) sv.push_back(to_json(s));
  json gaps = json::array();
  for (double x : rep.gaps) gaps.push_back(finite_or_null(x));
  json report{{"command", "growth"},
              {"seed", seed},
              {"tolerances", {{"rank", opts.tol}, {"gap", kRankGap}}},
              {"M", to_json(model.M)},
              {"M_hat", to_json(model.M_hat)},
              {"point", to_json(q)},
              {"depth", depth},
              {"dim_q", rep.dim_q},
              {"ranks", rep.ranks},
              {"singular_values", sv},
              {"gaps", gaps}};

  int code = kExitOk;
  if (model.constant_curvature()) {
    const double kappa = model.kappa();
    std::vector<int> pred = predicted_growth(model.n(), kappa == 0.0);
    report["kappa"] = kappa;
    if (kappa == 0.0) report["note"] = "kappa=0: the flag stabilizes at rank n";
    const size_t m = std::min(pred.size(), rep.ranks.size());
    std::vector<int> got(rep.ranks.begin(), rep.ranks.begin() + m);
    pred.resize(m);
    report["predicted"] = pred;
    report["matches_prediction"] = got == pred;
    if (got != pred) code = kExitAssert;
  }
  if (rep.min_gap() < kRankGap) {
    report["rank_ambiguity"] = true;
    code = kExitRank;
  }
  emit(g, report);
  return code;
}

// ---------------------------------------------------------------- audit

KillingGenerator parse_generator(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw InputError("generator needs a 'type'");
  const std::string type = j.at("type").get<std::string>();
  KillingGenerator gen;
  if (type == "rotation") {
    gen.type = KillingType::rotation;
    if (!j.contains("plane") || j.at("plane").size() != 2) throw InputError("rotation needs 'plane': [i, j]");
    gen.i = j.at("plane")[0].get<int>();
    gen.j = j.at("plane")[1].get<int>();
  } else if (type == "translation" || type == "boost") {
    gen.type = type == "translation" ? KillingType::translation : KillingType::boost;
    gen.i = j.value("axis", 0);
  } else if (type == "hopf") {
    gen.type = KillingType::hopf;
  } else {
    throw InputError("unknown generator type '" + type + "'");
  }
  return gen;
}

int cmd_audit(const Globals& g, std::optional<int> samples_flag) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  Rng rng(seed);
  const RollingModel model = load_model(cfg);
  const int n = model.n();
  const double tol = tolerance(g, cfg, "residual", 1e-6);
  const int samples = samples_flag ? *samples_flag : cfg.value("samples", 50);
  if (samples < 1) throw InputError("samples must be at least 1");
  if (!cfg.contains("candidate")) throw InputError("config needs a 'candidate'");
  const json& cj = cfg.at("candidate");
  const std::string kind = cj.value("kind", std::string());

  std::vector<SymmetryCandidate> cands;
  if (kind == "killing") {
    if (!cj.contains("generator")) throw InputError("killing candidate needs a 'generator'");
    cands.push_back(killing_to_symmetry(model, KillingField(model.M_hat, parse_generator(cj.at("generator")))));
  } else if (kind == "killing-catalog") {
    for (const KillingField& K : killing_catalog(model.M_hat)) cands.push_back(killing_to_symmetry(model, K));
  } else if (kind == "zero") {
    cands.push_back(zero_candidate(n));
  } else {
    throw InputError("unknown candidate kind '" + kind + "'");
  }
  if (cj.contains("perturbation")) {
    const double eps = cj.at("perturbation").get<double>();
    for (SymmetryCandidate& S : cands) {
      Mat E = random_skew(n, rng);
      S = perturb_candidate(S, eps * E / E.norm());
    }
  }

  std::vector<double> sym1, sym2, s01, s02, vz;
  for (int s = 0; s < samples; ++s) {
    const RollingState q = sample_state(model, rng);
    const Vec X = unit_random(n, rng), Y = unit_random(n, rng);
    for (const SymmetryCandidate& S : cands) {
      const ResidualPair a = symmetry_residual(model, S, q, X);
      sym1.push_back(a.eq1);
      sym2.push_back(a.eq2);
      if (S.kind == CandidateKind::sym0) {
        const ResidualPair b = sym0_residual(model, S, q, X);
        s01.push_back(b.eq1);
        s02.push_back(b.eq2);
      }
      vz.push_back(vertz_residual(model, S, q, X, Y));
    }
  }

  json residuals{{"symmetry_eq1", stats_json(sym1)}, {"symmetry_eq2", stats_json(sym2)}, {"vertz", stats_json(vz)}};
  if (!s01.empty()) {
    residuals["sym0_eq1"] = stats_json(s01);
    residuals["sym0_eq2"] = stats_json(s02);
  }
  json labels = json::array();
  for (const SymmetryCandidate& S : cands) labels.push_back(S.label);
  json report{{"command", "symmetry-check"},
              {"seed", seed},
              {"tolerances", {{"residual", tol}}},
              {"M", to_json(model.M)},
              {"M_hat", to_json(model.M_hat)},
              {"candidates", labels},
              {"samples", samples},
              {"residuals", residuals}};
  if (kind == "killing-catalog") {
    const RollingState q0 = sample_state(model, rng);
    const RankReport rr = sym0_dimension_probe(model, q0, cands);
    report["sym0_probe"] = {{"rank", rr.rank},
                            {"expected", n * (n + 1) / 2},
                            {"singular_values", to_json(rr.singular_values)},
                            {"gap", finite_or_null(rr.gap)}};
  }
  json failing = json::array();
  for (const auto& [name, st] : residuals.items())
    if (st.at("max").get<double>() >= tol) failing.push_back(name);
  report["failing"] = failing;
  emit(g, report);
  if (!failing.empty()) {
    std::cerr << "residuals above tolerance:";
    for (const auto& f : failing) std::cerr << ' ' << f.get<std::string>();
    std::cerr << "\n";
    return kExitAssert;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- killing

int cmd_killing(const Globals& g) {
  const json cfg = load_config(g);
  json mj;
  if (cfg.contains("M_hat"))
    mj = cfg.at("M_hat");
  else if (cfg.contains("manifold"))
    mj = cfg.at("manifold");
  else
    throw InputError("config needs 'M_hat' or 'manifold'");
  const SpaceForm M = space_form_from_json(mj);
  const std::uint64_t seed = effective_seed(g, cfg);
  Rng rng(seed);
  const double tol = tolerance(g, cfg, "skew", 1e-9);
  const Vec x = M.sample_point(rng);
  const auto cat = killing_catalog(M);
  json fields = json::array();
  double worst = 0.0;
  for (const KillingField& K : cat) {
    const double d = killing_skew_defect(K, x);
    worst = std::max(worst, d);
    fields.push_back({{"label", K.label()}, {"skew_defect", d}});
  }
  const int n = M.dim();
  emit(g, json{{"command", "killing"},
               {"seed", seed},
               {"tolerances", {{"skew", tol}}},
               {"manifold", to_json(M)},
               {"point", to_json(x)},
               {"dimension", cat.size()},
               {"expected", n * (n + 1) / 2},
               {"fields", fields}});
  return worst < tol ? kExitOk : kExitAssert;
}

// ---------------------------------------------------------------- rol

int cmd_rol(const Globals& g) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  Rng rng(seed);
  const RollingModel model = load_model(cfg);
  const RollingState q = load_or_sample_state(model, cfg, rng);
  const double tol = tolerance(g, cfg, "invertibility", 1e-8);
  const InvertibilityReport r = is_tilde_rol_invertible(model, q, tol);
  json report{{"command", "rol"},
              {"seed", seed},
              {"tolerances", {{"invertibility", tol}}},
              {"M", to_json(model.M)},
              {"M_hat", to_json(model.M_hat)},
              {"point", to_json(q)},
              {"tilde_rol", to_json(tilde_rol_matrix(model, q))},
              {"singular_values", to_json(r.singular_values)},
              {"invertible", r.invertible},
              {"condition_number", finite_or_null(r.condition_number)}};
  if (model.constant_curvature()) report["K_minus_K_hat"] = model.M.curvature() - model.M_hat.curvature();
  emit(g, report);
  return kExitOk;
}

// ---------------------------------------------------------------- nilpotent

std::string basis_name(int n, int k) {
  if (k < n) return "N" + std::to_string(k + 1);
  int idx = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++idx)
      if (idx == k) return "e" + std::to_string(i + 1) + "^e" + std::to_string(j + 1);
  return "Z" + std::to_string(k - idx + 1);
}

std::string format_vector(int n, const GradedVector<Rational>& v) {
  const auto basis = graded_basis<Rational>(n);
  std::vector<Rational> coeffs;
  for (const Rational& x : v.a) coeffs.push_back(x);
  for (const Rational& x : v.b) coeffs.push_back(x);
  for (const Rational& x : v.c) coeffs.push_back(x);
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const Rational c = coeffs[k];
    if (c == Rational(0)) continue;
    if (c < Rational(0))
      os << (first ? "-" : " - ");
    else if (!first)
      os << " + ";
    const Rational a = c < Rational(0) ? Rational(-c) : c;
    if (a != Rational(1)) os << a.numerator() << (a.denominator() != 1 ? "/" + std::to_string(a.denominator()) : "") << "*";
    os << basis_name(n, static_cast<int>(k));
    first = false;
  }
  return first ? "0" : os.str();
}

int cmd_nilpotent(const Globals& g, std::optional<int> n_flag) {
  const json cfg = load_config(g);
  const int n = n_flag ? *n_flag : cfg.value("n", 3);
  const StructureReport r = verify_structure<Rational>(n);
  const auto basis = graded_basis<Rational>(n);
  json table = json::array();
  for (size_t x = 0; x < basis.size(); ++x)
    for (size_t y = x + 1; y < basis.size(); ++y) {
      const auto b = nil_bracket(basis[x], basis[y]);
      if (b.is_zero()) continue;
      table.push_back({{"left", basis_name(n, static_cast<int>(x))},
                       {"right", basis_name(n, static_cast<int>(y))},
                       {"bracket", format_vector(n, b)}});
    }
  const auto cum = cumulative_dims(n);
  json report{{"command", "nilpotent"},
              {"n", n},
              {"tolerances", {{"arithmetic", "exact"}}},
              {"dims", r.dims},
              {"cumulative", cum},
              {"structure_constants", table},
              {"checks",
               {{"dims_ok", r.dims_ok},
                {"identity", {{"checked", r.identity_checks}, {"failed", r.identity_failures}}},
                {"antisymmetry", {{"checked", r.antisymmetry_checks}, {"failed", r.antisymmetry_failures}}},
                {"grading", {{"checked", r.grading_checks}, {"failed", r.grading_failures}}},
                {"jacobi", {{"checked", r.jacobi_checks}, {"failed", r.jacobi_failures}}},
                {"nilpotency", {{"checked", r.nilpotency_checks}, {"failed", r.nilpotency_failures}}},
                {"step_three", r.step_three}}},
              {"passed", r.passed()}};
  emit(g, report);
  return r.passed() ? kExitOk : kExitAssert;
}

// ---------------------------------------------------------------- flatness

int cmd_flatness(const Globals& g, std::string K, std::string K_hat, std::string beta, std::optional<int> n_flag) {
  const json cfg = load_config(g);
  auto pick = [&](std::string& v, const char* key) {
    if (!v.empty()) return;
    if (!cfg.contains(key)) throw InputError(std::string("missing '") + key + "'");
    const json& j = cfg.at(key);
    v = j.is_string() ? j.get<std::string>() : j.dump();
  };
  pick(K, "K");
  pick(K_hat, "K_hat");
  if (beta.empty()) beta = cfg.contains("beta") ? (cfg.at("beta").is_string() ? cfg.at("beta").get<std::string>() : cfg.at("beta").dump()) : "1";
  const int n = n_flag ? *n_flag : cfg.value("n", 3);
  const auto r = flatness_obstruction<BigRational>(parse_rational(K), parse_rational(K_hat), parse_rational(beta), n);
  auto both = [](const BigRational& v) { return json{{"exact", rational_to_string(v)}, {"value", rational_to_double(v)}}; };
  emit(g, json{{"command", "flatness"},
               {"n", n},
               {"tolerances", {{"arithmetic", "exact"}}},
               {"K", both(r.K)},
               {"K_hat", both(r.K_hat)},
               {"kappa", both(r.kappa)},
               {"beta", both(r.beta)},
               {"obstruction_M", both(r.obstruction_M)},
               {"obstruction_M_hat", both(r.obstruction_M_hat)},
               {"verdict", verdict_name(r.verdict)}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rolling manifolds: simulation, bracket growth, symmetry audits and nilpotent algebra"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)");
  app.add_option("--seed", g.seed, "Seed for sampled states");
  app.add_option("--tol", g.tol, "Override the primary tolerance of the subcommand");
  app.add_option("--out", g.out, "Output path (default stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  double step = 1e-3;
  bool project = false;
  auto* sim = app.add_subcommand("simulate", "Roll along a path and write the trajectory");
  sim->add_option("--step", step, "RK4 step")->check(CLI::PositiveNumber);
  sim->add_flag("--project", project, "Re-orthonormalize frames after each step");

  std::optional<int> depth;
  auto* growth = app.add_subcommand("growth", "Flag ranks of the rolling distribution");
  growth->add_option("--depth", depth, "Bracket depth (1-6)");

  std::optional<int> samples;
  auto* audit = app.add_subcommand("symmetry-check", "Residual sweep for a symmetry candidate");
  audit->alias("audit");
  audit->add_option("--samples", samples, "Number of sampled states");

  auto* killing = app.add_subcommand("killing", "List the Killing catalog of M_hat");
  auto* rolc = app.add_subcommand("rol", "Tilde-Rol matrix and invertibility at a state");

  std::optional<int> nn;
  auto* nil = app.add_subcommand("nilpotent", "Structure constants and exact checks of the graded algebra");
  nil->add_option("--n", nn, "Dimension n");

  std::string K, K_hat, beta;
  std::optional<int> fn;
  auto* flat = app.add_subcommand("flatness", "Non-flatness obstruction for constant curvatures");
  flat->add_option("--K", K, "Curvature of M (rational, e.g. 1/9)");
  flat->add_option("--K-hat", K_hat, "Curvature of M_hat");
  flat->add_option("--beta", beta, "Frame scale beta > 0");
  flat->add_option("--n", fn, "Dimension n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(g, step, project);
    if (*growth) return cmd_growth(g, depth);
    if (*audit) return cmd_audit(g, samples);
    if (*killing) return cmd_killing(g);
    if (*rolc) return cmd_rol(g);
    if (*nil) return cmd_nilpotent(g, nn);
    if (*flat) return cmd_flatness(g, K, K_hat, beta, fn);
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const MismatchError& e) {
    std::cerr << "mismatch: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssert;
  }
  return kExitConfig;
}
