#include "acsol/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "acsol/error.hpp"

namespace acsol {

namespace {

[[noreturn]] void bad_json(const std::string& what) {
  throw Error(ErrorKind::ParseError, "cli", "deserialize", what);
}

// Components of one point as nested arrays, slot 0 outermost.
Json nested(const TensorField& t, std::size_t p, int slot, std::size_t base) {
  if (slot == t.rank()) {
    const double v = t.at(base, p);
    return v == 0.0 ? 0.0 : v;  // no signed zeros in artifacts
  }
  Json arr = Json::array();
  const auto n = static_cast<std::size_t>(t.dim());
  for (std::size_t i = 0; i < n; ++i) arr.push_back(nested(t, p, slot + 1, base * n + i));
  return arr;
}

void unnest(const Json& j, TensorField& t, std::size_t p, int slot, std::size_t base) {
  if (slot == t.rank()) {
    if (!j.is_number()) bad_json("tensor entry is not a number");
    t.at(base, p) = j.get<double>();
    return;
  }
  const auto n = static_cast<std::size_t>(t.dim());
  if (!j.is_array() || j.size() != n) bad_json("tensor array has wrong length");
  for (std::size_t i = 0; i < n; ++i) unnest(j[i], t, p, slot + 1, base * n + i);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_json(std::string("missing key '") + key + "'");
  return j.at(key);
}

}  // namespace

Json tensor_to_json(const TensorField& t) {
  if (!t.domain().is_grid()) return nested(t, 0, 0, 0);
  Json arr = Json::array();
  for (std::size_t p = 0; p < t.points(); ++p) arr.push_back(nested(t, p, 0, 0));
  return arr;
}

TensorField tensor_from_json(const Json& j, const DomainPtr& domain, int up, int down) {
  TensorField t(domain, up, down);
  if (!domain->is_grid()) {
    unnest(j, t, 0, 0, 0);
    return t;
  }
  if (!j.is_array() || j.size() != domain->points()) bad_json("grid tensor needs one entry per point");
  for (std::size_t p = 0; p < domain->points(); ++p) unnest(j[p], t, p, 0, 0);
  return t;
}

Json link_to_json(const LinkManifold& link) {
  Json j = Json::object();
  if (!link.spec.catalog.empty()) {
    j["catalog"] = link.spec.catalog;
    return j;
  }
  j["dim"] = link.dim();
  j["grid"] = link.domain->sizes();
  if (!link.spec.metric.empty()) {
    j["metric"] = link.spec.metric;
  } else {
    j["samples"] = tensor_to_json(link.metric);
  }
  return j;
}

LinkManifold link_from_json(const Json& j) {
  if (!j.is_object()) bad_json("link must be an object");
  try {
    if (j.contains("catalog")) return build_link(j.at("catalog").get<std::string>());
    LinkSpec spec;
    spec.grid = field(j, "grid").get<std::vector<int>>();
    if (j.contains("dim") && j.at("dim").get<int>() != static_cast<int>(spec.grid.size())) {
      throw Error(ErrorKind::BadDimension, "link_geometry", "build_link",
                  "dim " + std::to_string(j.at("dim").get<int>()) + " does not match grid rank " +
                      std::to_string(spec.grid.size()));
    }
    if (j.contains("samples")) {
      if (spec.grid.empty() || spec.grid.size() > 3) {
        throw Error(ErrorKind::BadDimension, "link_geometry", "build_link",
                    "grid rank " + std::to_string(spec.grid.size()));
      }
      const DomainPtr dom = Domain::periodic_grid(spec.grid);
      return link_from_metric(tensor_from_json(j.at("samples"), dom, 0, 2), "sampled");
    }
    spec.metric = field(j, "metric").get<std::vector<std::vector<std::string>>>();
    return build_link(spec);
  } catch (const nlohmann::json::exception& e) {
    bad_json(std::string("link: ") + e.what());
  }
}

LinkManifold load_link(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return link_from_json(read_json_file(arg));
  return build_link(arg);
}

Json coefficients_to_json(const ExpansionCoefficients& c) {
  Json j = Json::object();
  j["n"] = c.dim();
  j["mode"] = to_string(c.mode);
  j["order"] = c.order;
  j["f0"] = c.f0;
  j["link"] = link_to_json(c.link);
  Json h = Json::array();
  for (std::size_t i = 0; i < c.h.size(); ++i) {
    Json e = Json::object();
    e["i"] = i;
    e["tensor"] = tensor_to_json(c.h[i]);
    h.push_back(std::move(e));
  }
  j["h"] = std::move(h);
  Json f = Json::array();
  for (std::size_t i = 0; i < c.f.size(); ++i) {
    Json e = Json::object();
    e["i"] = i;
    e["value"] = tensor_to_json(c.f[i]);
    f.push_back(std::move(e));
  }
  j["f"] = std::move(f);
  return j;
}

ExpansionCoefficients coefficients_from_json(const Json& j) {
  try {
    ExpansionCoefficients c;
    c.link = link_from_json(field(j, "link"));
    if (field(j, "n").get<int>() != c.dim()) bad_json("n does not match the link dimension");
    c.mode = parse_mode(field(j, "mode").get<std::string>());
    c.order = field(j, "order").get<int>();
    c.f0 = field(j, "f0").get<double>();
    const Json& h = field(j, "h");
    const Json& f = field(j, "f");
    if (!h.is_array() || h.size() != static_cast<std::size_t>(c.order + 1)) bad_json("h needs order+1 entries");
    if (!f.is_array() || f.size() != static_cast<std::size_t>(c.order + 2)) bad_json("f needs order+2 entries");
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (field(h[i], "i").get<std::size_t>() != i) bad_json("h entries out of order");
      c.h.push_back(tensor_from_json(field(h[i], "tensor"), c.link.domain, 0, 2));
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (field(f[i], "i").get<std::size_t>() != i) bad_json("f entries out of order");
      c.f.push_back(tensor_from_json(field(f[i], "value"), c.link.domain, 0, 0));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    bad_json(std::string("coefficients: ") + e.what());
  }
}

Json state_to_json(const RadialState& s, const LinkManifold& link, SolitonMode mode) {
  Json j = Json::object();
  j["r"] = s.r;
  j["mode"] = to_string(mode);
  j["link"] = link_to_json(link);
  j["H"] = tensor_to_json(s.H);
  j["K"] = tensor_to_json(s.K);
  j["f"] = tensor_to_json(s.f);
  j["phi"] = tensor_to_json(s.phi);
  return j;
}

RadialState state_from_json(const Json& j, const LinkManifold& link) {
  try {
    RadialState s;
    s.r = field(j, "r").get<double>();
    s.H = tensor_from_json(field(j, "H"), link.domain, 0, 2);
    s.K = tensor_from_json(field(j, "K"), link.domain, 0, 2);
    s.f = tensor_from_json(field(j, "f"), link.domain, 0, 0);
    s.phi = tensor_from_json(field(j, "phi"), link.domain, 0, 0);
    return s;
  } catch (const nlohmann::json::exception& e) {
    bad_json(std::string("state: ") + e.what());
  }
}

Json residual_to_json(const Residual& r) {
  Json j = Json::object();
  if (r.value.exact()) {
    j["floor"] = nullptr;
  } else {
    j["floor"] = r.value.floor();
  }
  Json terms = Json::array();
  for (const auto& [e, t] : r.value.terms()) {
    Json row = Json::object();
    row["exponent"] = e;
    row["norm"] = t.max_abs();
    row["relative"] = r.relative(e);
    terms.push_back(std::move(row));
  }
  j["terms"] = std::move(terms);
  j["max_relative"] = r.max_relative();
  return j;
}

namespace {

Json leading_to_json(const std::optional<LeadingTerm>& t) {
  if (!t) return nullptr;
  Json j = Json::object();
  j["exponent"] = t->exponent;
  j["norm"] = t->coefficient.max_abs();
  return j;
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

Json series_norms(const RadialSeries& s) {
  Json arr = Json::array();
  for (const auto& [e, t] : s.terms()) {
    Json row = Json::object();
    row["exponent"] = e;
    row["norm"] = t.max_abs();
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

Json diagnostics_to_json(const DiagnosticsReport& d) {
  Json j = Json::object();
  j["x_status"] = d.x_status;
  j["s_status"] = d.s_status;
  j["x_series"] = series_norms(d.x_series);
  j["s_series"] = series_norms(d.s_series);
  j["leading_x"] = leading_to_json(d.leading_x);
  j["leading_s"] = leading_to_json(d.leading_s);
  j["leading_radial"] = leading_to_json(d.leading_radial);
  j["leading_divergence"] = leading_to_json(d.leading_divergence);
  j["radial_error"] = optional_json(d.radial_error);
  j["divergence_error"] = optional_json(d.divergence_error);
  j["N"] = optional_json(d.n_order);
  j["M"] = optional_json(d.m_order);
  j["M_le_N_minus_1"] = d.m_at_most_n_minus_1;
  j["M_ge_N_plus_1"] = d.m_at_least_n_plus_1;
  return j;
}

Json decay_to_json(const DecayFit& fit) {
  Json j = Json::object();
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_min"] = fit.r_min;
  j["r_max"] = fit.r_max;
  j["samples"] = fit.samples.size();
  j["leading_exponent"] = fit.leading_exponent;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad_json(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cli", "run", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cli", "run", "cannot write '" + path + "'");
  out << text;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_decay_csv(std::ostream& os, const DecayFit& fit) {
  os << "r,constraint_norm,s_norm\n";
  for (const DecaySample& s : fit.samples) {
    os << format_double(s.r) << ',' << format_double(s.constraint_norm) << ','
       << format_double(s.s_norm) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const TrajectoryMonitor& m) {
  os << "r,constraint_norm,s_norm,deviation\n";
  for (const MonitorSample& s : m.samples) {
    os << format_double(s.r) << ',' << format_double(s.constraint_norm) << ','
       << format_double(s.s_norm) << ',' << format_double(s.deviation) << '\n';
  }
}

}  // namespace acsol
