#include "mch/serialize.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace mch::serialize {

using nlohmann::json;

nlohmann::json params_to_json(const WaveParameters& params) {
  json j;
  j["family"] = params.family == RootFamily::four_real ? "four-real" : "two-real";
  j["m"] = params.m;
  j["M"] = params.M;
  j["r"] = params.r;
  j["z_re"] = params.z.real();
  j["z_im"] = params.z.imag();
  j["c"] = params.c;
  j["a"] = params.a;
  j["d"] = params.d;
  return j;
}

WaveParameters params_from_json(const json& j) {
  WaveParameters p;
  const std::string family = j.at("family").get<std::string>();
  if (family == "four-real")
    p.family = RootFamily::four_real;
  else if (family == "two-real")
    p.family = RootFamily::two_real;
  else
    throw domain_error("params_from_json: unknown family '" + family + "'");
  p.m = j.at("m").get<double>();
  p.M = j.at("M").get<double>();
  p.r = j.at("r").get<double>();
  p.z = {j.at("z_re").get<double>(), j.at("z_im").get<double>()};
  p.c = j.at("c").get<double>();
  p.a = j.at("a").get<double>();
  p.d = j.at("d").get<double>();
  return p;
}

nlohmann::json category_to_json(const classify::WaveCategory& cat) {
  json j;
  j["kind"] = std::string(classify::kind_name(cat.kind));
  j["orientation"] =
      cat.orientation == classify::Orientation::crest_up ? "crest-up" : "crest-down";
  return j;
}

nlohmann::json profile_to_json(const profile::WaveProfile& prof) {
  json j;
  j["schema"] = schema_version;
  j["kind"] = "wave-profile";
  j["category"] = category_to_json(prof.category);
  j["params"] = params_to_json(prof.params);
  if (prof.period)
    j["period"] = *prof.period;
  else
    j["period"] = nullptr;
  j["crest_xi"] = prof.crest_xi;
  j["xi"] = prof.xi;
  j["phi"] = prof.phi;
  if (!prof.segments.empty()) {
    json segs = json::array();
    for (const auto& s : prof.segments) segs.push_back(params_to_json(s));
    j["segments"] = segs;
    j["plateaus"] = prof.plateaus;
    j["segment_of"] = prof.segment_of;
  }
  return j;
}

profile::WaveProfile profile_from_json(const json& j) {
  if (j.value("schema", "") != schema_version)
    throw domain_error("profile_from_json: unsupported schema");
  if (j.value("kind", "") != "wave-profile")
    throw domain_error("profile_from_json: not a wave-profile document");
  profile::WaveProfile prof;
  prof.params = params_from_json(j.at("params"));
  const auto& jc = j.at("category");
  const auto kind = classify::kind_from_name(jc.at("kind").get<std::string>());
  if (!kind) throw domain_error("profile_from_json: unknown category");
  prof.category.kind = *kind;
  prof.category.orientation = jc.at("orientation").get<std::string>() == "crest-down"
                                  ? classify::Orientation::crest_down
                                  : classify::Orientation::crest_up;
  if (!j.at("period").is_null()) prof.period = j.at("period").get<double>();
  prof.crest_xi = j.at("crest_xi").get<double>();
  prof.xi = j.at("xi").get<std::vector<double>>();
  prof.phi = j.at("phi").get<std::vector<double>>();
  if (prof.xi.size() != prof.phi.size())
    throw domain_error("profile_from_json: xi and phi lengths differ");
  if (j.contains("segments")) {
    for (const auto& js : j.at("segments")) prof.segments.push_back(params_from_json(js));
    prof.plateaus = j.at("plateaus").get<std::vector<double>>();
    prof.segment_of = j.at("segment_of").get<std::vector<int>>();
  }
  return prof;
}

nlohmann::json tw_report_to_json(const weakform::TwReport& rep) {
  json j;
  j["plateau_measure"] = rep.plateau_measure;
  j["smooth_segments"] = rep.smooth_segments;
  j["endpoint_limits_ok"] = rep.endpoint_limits_ok;
  j["plateau_a_consistent"] = rep.plateau_a_consistent;
  j["a_deviation"] = rep.a_deviation;
  j["tw3_refinement_ratio"] = rep.tw3_refinement_ratio;
  j["tw3_ok"] = rep.tw3_ok;
  j["pass"] = rep.pass();
  return j;
}

namespace {
void write_double(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp << std::setprecision(17) << v;
  os << tmp.str();
}
}  // namespace

void write_profile_csv(std::ostream& os, const profile::WaveProfile& prof) {
  os << "xi,phi\n";
  for (std::size_t i = 0; i < prof.xi.size(); ++i) {
    write_double(os, prof.xi[i]);
    os << ',';
    write_double(os, prof.phi[i]);
    os << '\n';
  }
}

void write_trace_header(std::ostream& os) { os << "t,E,F,V,min_ux,xbar,rho\n"; }

void write_trace_row(std::ostream& os, double t, const pde::InvariantTriple& inv, double min_ux,
                     double xbar, double rho) {
  write_double(os, t);
  for (double v : {inv.E, inv.F, inv.V, min_ux, xbar, rho}) {
    os << ',';
    write_double(os, v);
  }
  os << '\n';
}

void write_snapshot(std::ostream& os, const pde::SimulationState& state) {
  os << "# mch snapshot t=" << std::setprecision(17) << state.t << " length=" << state.length
     << " n=" << state.n() << '\n';
  os << "x,u\n";
  for (int i = 0; i < state.n(); ++i) {
    write_double(os, state.x(i));
    os << ',';
    write_double(os, state.u[static_cast<std::size_t>(i)]);
    os << '\n';
  }
}

pde::SimulationState read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# mch snapshot", 0) != 0)
    throw domain_error("read_snapshot: missing snapshot header");
  double t = 0.0, length = 0.0;
  int n = 0;
  {
    std::istringstream hs(line.substr(std::string("# mch snapshot").size()));
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("t=", 0) == 0) t = std::stod(tok.substr(2));
      if (tok.rfind("length=", 0) == 0) length = std::stod(tok.substr(7));
      if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
    }
  }
  if (!std::getline(is, line))  // column header
    throw domain_error("read_snapshot: truncated file");
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(n));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw domain_error("read_snapshot: malformed row");
    u.push_back(std::stod(line.substr(comma + 1)));
  }
  if (static_cast<int>(u.size()) != n)
    throw domain_error("read_snapshot: row count does not match header");
  return pde::SimulationState(length, std::move(u), t);
}

}  // namespace mch::serialize
