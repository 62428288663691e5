#include "clab/problem_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

namespace clab {

namespace {

#include "problem_schema.inc"

// base + slope * x_1, or base + slope * |x|^2
ScalarField closure_field(const nlohmann::json& j, double& lower_bound) {
  const std::string name = j.at("closure").get<std::string>();
  const double base = j.value("base", 1.0), slope = j.value("slope", name == "one" ? 0.0 : 0.5);
  if (name == "one") {
    if (j.contains("base") || j.contains("slope")) throw ConfigError("closure \"one\" takes no parameters");
    lower_bound = 1.0;
    return ScalarField::constant(1.0);
  }
  lower_bound = base - std::abs(slope);
  if (!(lower_bound > 0.0)) throw ConfigError("closure " + name + " is not positive on the unit disk");
  if (name == "affine")
    return ScalarField::from_generic([base, slope](const auto& x) { return base + slope * x[0]; }, "affine");
  return ScalarField::from_generic(
      [base, slope](const auto& x) { return base + slope * (x[0] * x[0] + x[1] * x[1]); }, "radial");
}

}  // namespace

const std::string& problem_schema() {
  static const std::string s(kProblemSchema);
  return s;
}

std::pair<TransmissionProblem, Mesh> ProblemConfig::instantiate() const {
  std::pair<TransmissionProblem, Mesh> out{problem, disk_mesh(mesh)};
  if (inclusion_radius > 0.0) out.first.inclusion = disk_inclusion(out.second, inclusion_radius, inclusion_contrast);
  return out;
}

ProblemConfig parse_problem_config(const std::string& text) {
  static const rapidjson::SchemaDocument schema = [] {
    rapidjson::Document d;
    d.Parse(kProblemSchema);
    if (d.HasParseError()) throw ConfigError("embedded schema is malformed");
    return rapidjson::SchemaDocument(d);
  }();
  rapidjson::Document doc;
  doc.Parse(text.c_str());
  if (doc.HasParseError())
    throw ConfigError(std::string("problem config is not valid JSON: ") + rapidjson::GetParseError_En(doc.GetParseError()) +
                      " at offset " + std::to_string(doc.GetErrorOffset()));
  rapidjson::SchemaValidator validator(schema);
  if (!doc.Accept(validator)) {
    rapidjson::StringBuffer where;
    validator.GetInvalidDocumentPointer().StringifyUriFragment(where);
    throw ConfigError(std::string("problem config violates the schema: keyword '") + validator.GetInvalidSchemaKeyword() +
                      "' at " + where.GetString());
  }

  ProblemConfig c;
  c.source = nlohmann::json::parse(text);
  const auto& j = c.source;
  if (j.contains("metric")) {
    const auto& mj = j.at("metric");
    c.problem.metric = mj.is_string() ? metric_from_id(mj.get<std::string>(), 2) : metric_from_json(mj);
    if (c.problem.metric.dim() != 2) throw ConfigError("the solver works in two dimensions");
  }

  bool constant_coefficients = true;
  double a_plus = 1.0, a_minus = 1.0;
  if (j.contains("coefficient")) {
    const auto& cj = j.at("coefficient");
    auto side = [&](const nlohmann::json& s, double& value, double& lb) -> ScalarField {
      if (s.is_number()) {
        value = lb = s.get<double>();
        return ScalarField::constant(value);
      }
      constant_coefficients = false;
      return closure_field(s, lb);
    };
    double lb_plus = 1.0, lb_minus = 1.0;
    c.problem.a.plus = side(cj.at("plus"), a_plus, lb_plus);
    c.problem.a.minus = side(cj.at("minus"), a_minus, lb_minus);
    c.problem.a.gamma0 = std::min(lb_plus, lb_minus);
    c.problem.a.name = "config";
  }

  const auto& bj = j.at("boundary");
  c.problem.bc.kind = bj.at("type") == "neumann" ? BoundaryCondition::Kind::Neumann : BoundaryCondition::Kind::Dirichlet;
  c.problem.bc.name = bj.at("data").get<std::string>();
  if (!constant_coefficients && (c.problem.bc.name == "piecewise-linear" || c.problem.bc.name == "piecewise-quadratic"))
    throw ConfigError(c.problem.bc.name + " data needs constant coefficients");
  try {
    c.problem.bc.data = named_function(c.problem.bc.name, a_plus, a_minus);
  } catch (const ValidationFailure& e) {
    throw ConfigError(e.what());
  }

  c.mesh.h = j.at("h").get<double>();
  if (j.contains("radii")) c.mesh.radii = j.at("radii").get<std::vector<double>>();
  c.mesh.grading = j.value("grading", 0.0);
  c.mesh.h_min = j.value("h_min", c.mesh.h_min);
  if (j.contains("inclusion")) {
    c.inclusion_radius = j.at("inclusion").at("radius").get<double>();
    c.inclusion_contrast = j.at("inclusion").at("contrast").get<double>();
    if (c.inclusion_contrast == 1.0) throw ConfigError("inclusion contrast must differ from 1");
    c.mesh.radii.push_back(c.inclusion_radius);
  }
  return c;
}

ProblemConfig load_problem_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_problem_config(ss.str());
}

}  // namespace clab
