#include "rollsym/io.hpp"

#include <cmath>
#include <iomanip>

#include "rollsym/errors.hpp"

namespace rollsym {

namespace {

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw InputError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) throw InputError(std::string("missing integer '") + key + "'");
  return j.at(key).get<int>();
}

}  // namespace

SpaceForm space_form_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw InputError("manifold spec needs a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean") return SpaceForm::euclidean(integer(j, "dim"));
  if (kind == "sphere") return SpaceForm::sphere(integer(j, "dim"), number(j, "radius", 1.0));
  if (kind == "hyperbolic") return SpaceForm::hyperbolic(integer(j, "dim"), number(j, "radius", 1.0));
  if (kind == "warped") {
    if (!j.contains("interval") || !j.at("interval").is_array() || j.at("interval").size() != 2)
      throw InputError("warped spec needs 'interval': [lo, hi]");
    if (!j.contains("warp") || !j.contains("fiber")) throw InputError("warped spec needs 'warp' and 'fiber'");
    const json& w = j.at("warp");
    if (!w.contains("name") || !w.at("name").is_string()) throw InputError("warp spec needs a 'name'");
    const std::string name = w.at("name").get<std::string>();
    WarpFunction f;
    if (name == "cos")
      f.family = WarpFunction::Family::cos;
    else if (name == "cosh")
      f.family = WarpFunction::Family::cosh;
    else if (name == "exp")
      f.family = WarpFunction::Family::exp;
    else if (name == "affine")
      f.family = WarpFunction::Family::affine;
    else
      throw InputError("unknown warp function '" + name + "'");
    f.amplitude = number(w, "amplitude", 1.0);
    f.rate = number(w, "rate", 1.0);
    f.phase = number(w, "phase", 0.0);
    f.slope = number(w, "slope", 1.0);
    f.intercept = number(w, "intercept", 0.0);
    const Interval I{j.at("interval")[0].get<double>(), j.at("interval")[1].get<double>()};
    SpaceForm M = SpaceForm::warped(I, f, space_form_from_json(j.at("fiber")));
    if (j.contains("dim") && integer(j, "dim") != M.dim()) throw InputError("warped 'dim' must equal 1 + fiber dim");
    return M;
  }
  throw InputError("unknown manifold kind '" + kind + "'");
}

json to_json(const SpaceForm& M) {
  json j;
  j["kind"] = kind_name(M.kind());
  j["dim"] = M.dim();
  switch (M.kind()) {
    case Kind::euclidean:
      break;
    case Kind::sphere:
    case Kind::hyperbolic:
      j["radius"] = M.radius();
      break;
    case Kind::warped: {
      j["interval"] = {M.interval().lo, M.interval().hi};
      const WarpFunction& f = M.warp();
      json w{{"name", f.name()}};
      if (f.family == WarpFunction::Family::affine) {
        w["slope"] = f.slope;
        w["intercept"] = f.intercept;
      } else {
        w["amplitude"] = f.amplitude;
        w["rate"] = f.rate;
        w["phase"] = f.phase;
      }
      j["warp"] = w;
      j["fiber"] = to_json(M.fiber());
      break;
    }
  }
  return j;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw InputError("expected a numeric array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("expected a numeric array");
    v(i) = j[i].get<double>();
  }
  return v;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("expected a non-empty array of rows");
  const size_t rows = j.size(), cols = j[0].size();
  Mat m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    const Vec row = vec_from_json(j[r]);
    if (static_cast<size_t>(row.size()) != cols) throw InputError("matrix rows differ in length");
    m.row(r) = row.transpose();
  }
  return m;
}

json to_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(finite_or_null(v(i)));
  return j;
}

json to_json(const Mat& m) {
  json j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(to_json(Vec(m.row(r).transpose())));
  return j;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

RollingState state_from_json(const RollingModel& model, const json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("x_hat") || !j.contains("A"))
    throw InputError("state needs 'x', 'x_hat' and 'A'");
  RollingState q{vec_from_json(j.at("x")), vec_from_json(j.at("x_hat")), mat_from_json(j.at("A"))};
  check_state(model, q, 1e-9);
  return q;
}

json to_json(const RollingState& q) { return json{{"x", to_json(q.x)}, {"x_hat", to_json(q.x_hat)}, {"A", to_json(q.A)}}; }

void write_trajectory_csv(std::ostream& os, const RollingCurve& curve) {
  if (curve.states.empty()) return;
  const RollingState& q0 = curve.states.front();
  os << "t";
  for (Eigen::Index i = 0; i < q0.x.size(); ++i) os << ",x_" << i;
  for (Eigen::Index i = 0; i < q0.x_hat.size(); ++i) os << ",x_hat_" << i;
  for (Eigen::Index r = 0; r < q0.A.rows(); ++r)
    for (Eigen::Index c = 0; c < q0.A.cols(); ++c) os << ",A_" << r << c;
  os << ",isometry_residual\n";
  os << std::setprecision(17);
  for (size_t k = 0; k < curve.states.size(); ++k) {
    const RollingState& q = curve.states[k];
    os << curve.times[k];
    for (Eigen::Index i = 0; i < q.x.size(); ++i) os << ',' << q.x(i);
    for (Eigen::Index i = 0; i < q.x_hat.size(); ++i) os << ',' << q.x_hat(i);
    for (Eigen::Index r = 0; r < q.A.rows(); ++r)
      for (Eigen::Index c = 0; c < q.A.cols(); ++c) os << ',' << q.A(r, c);
    os << ',' << curve.isometry_residual[k] << '\n';
  }
}

}  // namespace rollsym
