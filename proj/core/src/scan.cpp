#include "clab/scan.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "clab/parallel.hpp"

namespace clab {

std::vector<double> log_grid(double a, double b, std::size_t n) {
  if (n == 0) throw ParameterError("tau grid needs at least one point");
  if (!(a > 0.0) || !(b >= a)) throw ParameterError("tau grid needs 0 < a <= b");
  if (n == 1) return {a};
  if (!(b > a)) throw ParameterError("tau grid with several points needs a < b");
  std::vector<double> t(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (n - 1));
  t.front() = a;
  t.back() = b;
  return t;
}

std::vector<double> parse_tau_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ParameterError("tau grid must look like a:b:n");
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    const std::string sa = text.substr(0, c1), sb = text.substr(c1 + 1, c2 - c1 - 1), sn = text.substr(c2 + 1);
    const double a = std::stod(sa, &u1);
    const double b = std::stod(sb, &u2);
    const long n = std::stol(sn, &u3);
    if (u1 != sa.size() || u2 != sb.size() || u3 != sn.size() || n <= 0) throw ParameterError("bad tau grid");
    return log_grid(a, b, static_cast<std::size_t>(n));
  } catch (const ParameterError&) {
    throw ParameterError("tau grid must look like a:b:n with 0 < a <= b and n >= 1, got '" + text + "'");
  } catch (const std::exception&) {
    throw ParameterError("tau grid must look like a:b:n with 0 < a <= b and n >= 1, got '" + text + "'");
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw DegenerateError("slope fit with identical abscissae");
  return (n * sxy - sx * sy) / den;
}

ScanResult tau_scan(const ScanConfig& cfg) {
  if (cfg.family.empty()) throw ParameterError("test-function family must be nonempty");
  if (cfg.taus.empty()) throw ParameterError("tau grid must be nonempty");
  for (std::size_t i = 1; i < cfg.taus.size(); ++i)
    if (!(cfg.taus[i] > cfg.taus[i - 1])) throw ParameterError("tau grid must be strictly increasing");

  ScanResult r;
  r.estimate = cfg.estimate;
  r.taus = cfg.taus;
  r.eps = cfg.eps.eps;
  r.metric_id = cfg.metric_id;
  r.gamma_id = cfg.gamma_id;
  r.family_id = cfg.family_id;
  r.seed = cfg.seed;
  const std::size_t nm = cfg.family.size(), nt = cfg.taus.size();
  r.sides.assign(nm, std::vector<CarlemanSides>(nt));
  for (const auto& u : cfg.family) {
    r.members.push_back(u.name);
    r.member_radius.push_back(u.support.r_out);
  }

  parallel_for(nm * nt, resolve_threads(cfg.threads), [&](std::size_t k) {
    const std::size_t i = k / nt, j = k % nt;
    r.sides[i][j] = carleman_sides(cfg.family[i], cfg.gamma, cfg.metric, cfg.taus[j], cfg.eps, cfg.estimate,
                                   cfg.options);
  });

  r.member_tau0.resize(nm);
  bool all = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < nm; ++i) {
    std::size_t first = nt;
    for (std::size_t j = nt; j-- > 0;) {
      if (r.sides[i][j].margin < 0.0) break;
      first = j;
    }
    if (first < nt) {
      r.member_tau0[i] = cfg.taus[first];
      worst = std::max(worst, cfg.taus[first]);
    } else {
      all = false;
    }
  }
  if (all) r.tau0 = worst;

  std::vector<std::size_t> order(nm);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.member_radius[a] < r.member_radius[b]; });
  for (std::size_t k = 0; k < nm; ++k) {
    // all members up to this radius, including ties, must have a tau0
    const double R = r.member_radius[order[k]];
    bool ok = true;
    for (std::size_t l = 0; l < nm; ++l)
      if (r.member_radius[l] <= R && !r.member_tau0[l]) ok = false;
    if (!ok) break;
    r.rbar = R;
  }
  return r;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(const ScanResult& r, std::ostream& os) {
  os << "tau,term_grad,term_u2,term_r,term_interface,lhs,margin,member,log_scale\n";
  for (std::size_t i = 0; i < r.sides.size(); ++i) {
    for (const auto& s : r.sides[i]) {
      os << g17(s.tau) << ',' << g17(s.term_grad) << ',' << g17(s.term_u2) << ',' << g17(s.term_r) << ','
         << g17(s.term_interface) << ',' << g17(s.lhs) << ',' << g17(s.margin) << ',' << csv_quote(r.members[i])
         << ',' << g17(s.log_scale) << '\n';
    }
  }
}

nlohmann::json summary_json(const ScanResult& r) {
  nlohmann::json members = nlohmann::json::array();
  for (std::size_t i = 0; i < r.members.size(); ++i) {
    nlohmann::json m = {{"name", r.members[i]}, {"support_radius", r.member_radius[i]}};
    m["tau0"] = r.member_tau0[i] ? nlohmann::json(*r.member_tau0[i]) : nlohmann::json(nullptr);
    members.push_back(m);
  }
  return {{"estimate", to_string(r.estimate)},
          {"eps", r.eps},
          {"metric", r.metric_id},
          {"gamma", r.gamma_id},
          {"family", r.family_id},
          {"seed", r.seed},
          {"taus", r.taus.size()},
          {"tau0", r.tau0 ? nlohmann::json(*r.tau0) : nlohmann::json(nullptr)},
          {"rbar", r.rbar ? nlohmann::json(*r.rbar) : nlohmann::json(nullptr)},
          {"members", members}};
}

}  // namespace clab
