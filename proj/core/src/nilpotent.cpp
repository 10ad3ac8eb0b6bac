#include "rollsym/nilpotent.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace rollsym {

std::array<int, 3> graded_dims(int n) {
  if (n < 2) throw InputError("graded dimensions need n >= 2");
  return {n, n * (n - 1) / 2, n};
}

std::array<int, 3> cumulative_dims(int n) {
  const auto d = graded_dims(n);
  return {d[0], d[0] + d[1], d[0] + d[1] + d[2]};
}

std::string verdict_name(FlatnessVerdict v) { return v == FlatnessVerdict::not_flat ? "not_flat" : "inconclusive"; }

BigRational parse_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  static const std::regex frac(R"(\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*)");
  static const std::regex dec(R"(\s*([+-]?)(\d*)\.(\d+)(?:[eE]([+-]?\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, frac)) {
    std::string whole = m[1].str();
    const bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.erase(0, 1);
    whole.erase(0, std::min(whole.find_first_not_of('0'), whole.size() - 1));
    cpp_int num(whole);
    if (negative) num = -num;
    std::string den_text = m[2].matched ? m[2].str() : std::string("1");
    den_text.erase(0, std::min(den_text.find_first_not_of('0'), den_text.size() - 1));
    const cpp_int den(den_text);
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    return BigRational(num, den);
  }
  if (std::regex_match(text, m, dec)) {
    // cpp_int reads a leading 0 as octal.
    std::string digits = m[2].str() + m[3].str();
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    cpp_int num(digits);
    if (m[1].str() == "-") num = -num;
    long exponent = -static_cast<long>(m[3].str().size());
    if (m[4].matched) exponent += std::stol(m[4].str());
    if (std::abs(exponent) > 4000) throw InputError("exponent out of range in '" + text + "'");
    cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::abs(exponent)));
    return exponent >= 0 ? BigRational(num * scale) : BigRational(num, scale);
  }
  throw InputError("cannot parse '" + text + "' as a rational number");
}

std::string rational_to_string(const BigRational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rational_to_double(const BigRational& r) { return r.convert_to<double>(); }

VerticalActionReport vertical_action_consistency(const RollingModel& model, const RollingState& q, double beta,
                                                 WMode mode) {
  if (!model.constant_curvature()) throw InputError("vertical action check needs a constant-curvature pair");
  const double kappa = model.kappa();
  if (kappa == 0.0) throw InputError("kappa = 0: K and K_hat must differ");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  const int n = model.n();
  const double K = model.M.curvature();
  const double sb = std::sqrt(beta);
  const StencilOptions inner{1e-3, 4};
  const StencilOptions outer{1e-2, 4};

  auto W = [&](int i) {
    return [i, sb, mode, n](const RollingState& s) -> Vec {
      const Vec e = Vec::Unit(n, i);
      return mode == WMode::frame ? Vec(sb * e) : Vec(sb * s.A.transpose() * e);
    };
  };
  auto as_map = [](std::function<Vec(const RollingState&)> f) {
    return BundleMap{ValueKind::vec_m, [f](const RollingState& s) { return Mat(f(s)); }};
  };
  // q' -> L_R(W_j(q'))|_q' W_k.
  auto lr_of = [&](int j, int k) {
    return BundleMap{ValueKind::vec_m, [&, j, k](const RollingState& s) {
                       return lr_derivative(model, as_map(W(k)), s, W(j)(s), inner);
                     }};
  };

  VerticalActionReport r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec wi = W(i)(q), wj = W(j)(q), wk = W(k)(q);
        const Vec t1 = lr_derivative(model, lr_of(j, k), q, wi, outer);
        const Vec t2 = lr_derivative(model, lr_of(i, k), q, wj, outer);
        const Vec dij = lr_derivative(model, as_map(W(j)), q, wi, inner);
        const Vec dji = lr_derivative(model, as_map(W(i)), q, wj, inner);
        const Vec t3 = lr_derivative(model, as_map(W(k)), q, dij - dji, inner);
        const Mat xi = wedge_matrix(wi, wj);
        const Vec vert = vertical_derivative(model, as_map(W(k)), q, xi, inner);
        const Vec curv = K * (xi * wk);
        r.commutator_residual = std::max(r.commutator_residual, (t1 - t2 - t3 + kappa * vert - curv).norm());
        r.lemma_defect = std::max(r.lemma_defect, (kappa * vert - curv).norm());
      }
  return r;
}

}  // namespace rollsym
