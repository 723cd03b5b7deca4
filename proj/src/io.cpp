#include "mjds/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mjds {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != ' ') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw ValidationError("cannot parse number '" + tok + "' in " + where);
  return v;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return buf.str();
}

std::string ensemble_csv(const EnsembleStats& stats) {
  std::string out = "k,mean_sq,min_norm,max_norm,std,ci99_halfwidth\n";
  for (std::size_t k = 0; k < stats.mean_sq.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += fmt17(stats.mean_sq[k]);
    out += ',';
    out += fmt17(stats.min_norm[k]);
    out += ',';
    out += fmt17(stats.max_norm[k]);
    out += ',';
    out += fmt17(stats.std_dev[k]);
    out += ',';
    out += fmt17(stats.ci99[k]);
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  if (traj.states.empty()) throw ValidationError("trajectory has no states");
  const Eigen::Index dim = traj.states.front().size();
  std::string out = "k";
  for (Eigen::Index m = 1; m <= dim; ++m) out += ",x_" + std::to_string(m);
  out += ",mode\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out += std::to_string(k);
    for (Eigen::Index m = 0; m < dim; ++m) {
      out += ',';
      out += fmt17(traj.states[k](m));
    }
    out += ',';
    if (k < traj.modes.size()) out += std::to_string(traj.modes[k]);
    out += '\n';  // the final state has no outgoing mode
  }
  return out;
}

std::string region_csv(const RegionGrid& grid) {
  std::string out = "p,q,feasible,lambda_ratio,L_B,U_B,omega1,omega2,alpha3\n";
  for (const RegionCell& cell : grid.cells) {
    out += fmt17(cell.p);
    out += ',';
    out += fmt17(cell.q);
    out += ',';
    out += cell.feasible ? '1' : '0';
    out += ',';
    out += fmt17(cell.lambda_ratio);
    out += ',';
    out += fmt17(cell.lower);
    out += ',';
    out += fmt17(cell.upper);
    out += ',';
    out += fmt17(cell.omega1);
    out += ',';
    out += fmt17(cell.omega2);
    out += ',';
    out += fmt17(cell.alpha3);
    out += '\n';
  }
  return out;
}

std::string frontier_csv(const std::vector<FrontierPoint>& points) {
  std::string out = "one_minus_p,max_q\n";
  for (const FrontierPoint& pt : points) {
    out += fmt17(pt.one_minus_p);
    out += ',';
    out += fmt17(pt.max_q);
    out += '\n';
  }
  return out;
}

MomentCurve read_ensemble_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV " + path.string());
  const auto header = split_csv_line(line);
  int col_k = -1, col_mean = -1, col_ci = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "k") col_k = static_cast<int>(c);
    if (header[c] == "mean_sq") col_mean = static_cast<int>(c);
    if (header[c] == "ci99_halfwidth") col_ci = static_cast<int>(c);
  }
  if (col_k < 0 || col_mean < 0)
    throw ValidationError("CSV " + path.string() + " lacks required columns k, mean_sq");

  MomentCurve curve;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tok = split_csv_line(line);
    if (tok.size() != header.size())
      throw ValidationError("CSV row " + std::to_string(row + 2) + " has " +
                            std::to_string(tok.size()) + " fields, expected " +
                            std::to_string(header.size()));
    const std::string where = path.string() + " row " + std::to_string(row + 2);
    const double k = parse_double(tok[static_cast<std::size_t>(col_k)], where);
    if (k != static_cast<double>(row))
      throw ValidationError("non-contiguous k column at " + where);
    curve.values.push_back(parse_double(tok[static_cast<std::size_t>(col_mean)], where));
    if (col_ci >= 0)
      curve.ci_halfwidths.push_back(parse_double(tok[static_cast<std::size_t>(col_ci)], where));
    ++row;
  }
  if (curve.values.empty()) throw ValidationError("CSV " + path.string() + " has no data rows");
  return curve;
}

Json certificate_json(const CertificateReport& report) {
  Json spec;
  spec["gamma"] = report.spec.gamma;
  spec["p"] = report.spec.p;
  spec["q"] = report.spec.q;
  spec["c"] = report.spec.c;
  spec["c_is_e"] = report.spec.c == std::numbers::e;
  if (report.spec.lambda_ratio) spec["lambda_ratio"] = *report.spec.lambda_ratio;

  Json j;
  j["verdict"] = report.verdict;
  j["caveat"] = report.caveat;
  j["alpha3_provenance"] = report.alpha3_provenance;
  j["c_exceeds_e"] = report.c_exceeds_e;
  j["spec"] = spec;
  j["region"] = {{"q_cap", report.q_cap},
                 {"L_B", report.lower},
                 {"U_B", report.upper},
                 {"feasible", report.feasible}};
  j["lambda_ratio"] =
      report.lambda_ratio ? Json(*report.lambda_ratio) : Json(nullptr);
  if (report.constants) {
    const ChainConstants& cc = *report.constants;
    j["constants"] = {{"lambda1", cc.lambda1}, {"lambda2", cc.lambda2}, {"alpha1", cc.alpha1},
                      {"alpha2", cc.alpha2},   {"alpha3", cc.alpha3},   {"omega1", cc.omega1},
                      {"omega2", cc.omega2},   {"beta1", cc.beta1},     {"beta2", cc.beta2},
                      {"beta3", cc.beta3}};
  } else {
    j["constants"] = nullptr;
  }
  if (report.certificate) {
    const DecayCertificate& cert = *report.certificate;
    j["certificate"] = {{"gamma1", cert.gamma1}, {"gamma2", cert.gamma2},
                        {"gamma3", cert.gamma3}, {"gamma4", cert.gamma4},
                        {"M", cert.M},           {"zeta", cert.zeta}};
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

Json condition_json(const ConditionReport& report) {
  Json j;
  j["verdict"] = report.verdict();
  if (report.passed()) j["caveat"] = ConditionReport::kPassCaveat;
  j["checked_samples"] = report.checked_samples;
  j["tol"] = report.tol;
  j["alpha1"] = report.alpha1;
  j["alpha2"] = report.alpha2;
  j["alpha3"] = report.alpha3;
  j["total_violations"] = report.total_violations;
  j["min_slack"] = {{"lower", report.min_slack_lower},
                    {"upper", report.min_slack_upper},
                    {"descent", report.min_slack_descent}};
  Json vs = Json::array();
  for (const ConditionViolation& v : report.violations)
    vs.push_back({{"sample", v.sample},
                  {"mode", v.mode},
                  {"condition", v.condition},
                  {"lhs", v.lhs},
                  {"rhs", v.rhs}});
  j["violations"] = vs;
  return j;
}

Json fit_json(const DecayFit& fit) {
  Json j;
  j["M_hat"] = fit.M_hat;
  j["zeta_hat"] = fit.zeta_hat;
  j["window"] = {fit.k0, fit.k1};
  j["r_squared"] = fit.r_squared;
  j["n_points"] = fit.n_points;
  j["decayed_below_floor"] = fit.decayed_below_floor;
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string gnuplot_ensemble_script(const std::string& csv_name) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set logscale y\n";
  s += "set xlabel 'k'\n";
  s += "set ylabel 'mean squared norm'\n";
  s += "plot '" + csv_name + "' using 1:2 with lines title 'mean', \\\n";
  s += "     '' using 1:($2+3*$6) with lines dashtype 2 title 'mean + 3 ci'\n";
  return s;
}

}  // namespace mjds
