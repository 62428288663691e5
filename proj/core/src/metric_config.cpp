#include <regex>

#include "clab/metric.hpp"

namespace clab {

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key in metric config: " + it.key());
  }
}

double default_rho(double c) { return c > 0.0 ? std::min(0.9, 0.25 / c) : 0.9; }

MetricField paraboloid_metric(double c, int dim, double rho) {
  if (c == 0.0) return MetricField::identity(dim);
  const PiecewiseCoefficient unit = PiecewiseCoefficient::constant(1.0, 1.0);
  return flatten_interface(dim, InterfaceGraph::paraboloid(c, dim), unit, rho).metric;
}

}  // namespace

MetricField metric_from_id(const std::string& id, int dim) {
  require_dim(dim);
  if (id == "identity") return MetricField::identity(dim);
  if (id == "paraboloid") return paraboloid_metric(0.5, dim, default_rho(0.5));
  static const std::regex re(R"(paraboloid\(\s*([-+0-9.eE]+)\s*\))");
  std::smatch m;
  if (std::regex_match(id, m, re)) {
    const double c = std::stod(m[1].str());
    return paraboloid_metric(c, dim, default_rho(std::abs(c)));
  }
  throw ConfigError("unknown metric id: " + id);
}

MetricField metric_from_json(const nlohmann::json& j) {
  if (j.is_string()) return metric_from_id(j.get<std::string>(), 2);
  if (!j.is_object() || !j.contains("type")) throw ConfigError("metric config needs a \"type\"");
  const std::string type = j.at("type").get<std::string>();
  const int dim = j.value("dim", 2);
  require_dim(dim);
  if (type == "identity") {
    reject_unknown(j, {"type", "dim"});
    return MetricField::identity(dim);
  }
  if (type == "paraboloid") {
    reject_unknown(j, {"type", "dim", "c", "rho"});
    const double c = j.value("c", 0.5);
    return paraboloid_metric(c, dim, j.value("rho", default_rho(std::abs(c))));
  }
  if (type == "custom-table") {
    reject_unknown(j, {"type", "dim", "base", "linear", "radius", "name"});
    Mat base = Mat::Identity();
    std::array<Mat, kMaxDim> lin;
    for (auto& l : lin) l.setZero();
    auto read = [dim](const nlohmann::json& a, Mat& out) {
      if (!a.is_array() || static_cast<int>(a.size()) != dim) throw ConfigError("matrix must be dim x dim");
      for (int i = 0; i < dim; ++i) {
        if (!a[i].is_array() || static_cast<int>(a[i].size()) != dim) throw ConfigError("matrix must be dim x dim");
        for (int k = 0; k < dim; ++k) out(i, k) = a[i][k].get<double>();
      }
    };
    if (j.contains("base")) read(j.at("base"), base);
    if (j.contains("linear")) {
      const auto& l = j.at("linear");
      if (!l.is_array() || static_cast<int>(l.size()) != dim) throw ConfigError("linear needs one matrix per coordinate");
      for (int k = 0; k < dim; ++k) read(l[k], lin[k]);
    }
    for (int k = 0; k < dim; ++k)
      if (!lin[k].isApprox(lin[k].transpose(), 0.0) && (lin[k] - lin[k].transpose()).cwiseAbs().maxCoeff() > 0)
        throw ConfigError("linear table matrices must be symmetric");
    if ((base - base.transpose()).cwiseAbs().maxCoeff() > 0) throw ConfigError("base matrix must be symmetric");
    auto f = [base, lin, dim](const auto& x) {
      using T = std::decay_t<decltype(x[0])>;
      std::array<std::array<T, kMaxDim>, kMaxDim> g;
      for (int a = 0; a < kMaxDim; ++a)
        for (int b = 0; b < kMaxDim; ++b) {
          g[a][b] = T(base(a, b));
          for (int k = 0; k < dim; ++k) g[a][b] = g[a][b] + lin[k](a, b) * x[k];
        }
      return g;
    };
    return MetricField::analytic(dim, f, j.value("name", std::string("custom-table")), j.value("radius", 1.0));
  }
  throw ConfigError("unknown metric type: " + type);
}

}  // namespace clab
