#include "midp/report.hpp"

#include <sstream>
#include <stdexcept>

#include "midp/format.hpp"
#include "midp/procedures.hpp"
#include "midp/rng.hpp"

namespace midp {

namespace {

const std::vector<std::string> kKnownMethods = {"BH", "BH-Midp", "aBH", "aBH-Midp",
                                                "SARP"};

bool known_method(const std::string& name) {
  for (const std::string& m : kKnownMethods)
    if (m == name) return true;
  return false;
}

}  // namespace

RunReport run_tests(const CountTable& table, double alpha,
                    const std::vector<std::string>& methods, double lambda,
                    std::optional<std::uint64_t> seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("run_tests: alpha must lie in (0, 1)");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("run_tests: lambda must lie in (0, 1)");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (!known_method(methods[i]))
      throw std::invalid_argument("run_tests: unknown method '" + methods[i] + "'");
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j])
        throw std::invalid_argument("run_tests: duplicate method '" + methods[i] + "'");
    if (methods[i] == "SARP" && !seed)
      throw std::invalid_argument("run_tests: SARP needs an explicit seed");
  }

  RunReport report;
  report.alpha = alpha;
  report.lambda = lambda;
  report.has_seed = seed.has_value();
  report.seed = seed.value_or(0);
  report.has_margins = table.has_margins;
  report.methods = methods;

  const std::size_t n = table.rows.size();
  std::vector<PValueRecord> records;
  records.reserve(n);
  std::vector<double> conv(n), mid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CountRow& row = table.rows[i];
    PValueRecord rec = table.has_margins
                           ? fet_pvalues(row.c1, row.c2, row.n1, row.n2)
                           : bt_pvalues(row.c1, row.c2);
    conv[i] = rec.conventional_double();
    mid[i] = rec.mid_double();

    TestRow out;
    out.id = row.id;
    out.c1 = row.c1;
    out.c2 = row.c2;
    out.n1 = row.n1;
    out.n2 = row.n2;
    out.lower = rec.lower_double();
    out.tied = rec.tied_double();
    out.conventional = conv[i];
    out.mid = mid[i];
    out.dirac = rec.tied == 1;  // the whole distribution is one tie class
    out.rejected.assign(methods.size(), false);
    report.rows.push_back(std::move(out));
    records.push_back(std::move(rec));
  }

  for (std::size_t k = 0; k < methods.size(); ++k) {
    StepUpResult result;
    double pi0 = 1.0;
    if (n > 0) {
      const std::string& name = methods[k];
      if (name == "BH") {
        result = bh(conv, alpha);
      } else if (name == "BH-Midp") {
        result = bh(mid, alpha);
      } else if (name == "aBH") {
        pi0 = storey_pi0(conv, lambda);
        result = adaptive_bh(conv, alpha, pi0);
      } else if (name == "aBH-Midp") {
        pi0 = storey_pi0(mid, lambda);
        result = adaptive_bh(mid, alpha, pi0);
      } else {  // SARP
        RngStream rng(*seed);
        std::vector<double> uniforms(n);
        for (double& u : uniforms) u = rng.uniform();
        std::vector<double> rho = randomized_pvalues(records, uniforms);
        pi0 = storey_pi0(rho, lambda);
        result = adaptive_bh(rho, alpha, pi0);
      }
    }
    report.pi0_used.push_back(pi0);
    for (std::size_t idx : result.rejected) report.rows[idx].rejected[k] = true;
    report.discoveries.push_back(result.rejected.size());
  }
  return report;
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["alpha"] = report.alpha;
  j["lambda"] = report.lambda;
  if (report.has_seed)
    j["seed"] = report.seed;
  else
    j["seed"] = nullptr;
  j["has_margins"] = report.has_margins;
  j["methods"] = report.methods;
  j["pi0_used"] = report.pi0_used;
  j["discoveries"] = report.discoveries;
  j["tests"] = nlohmann::json::array();
  for (const TestRow& row : report.rows) {
    nlohmann::json t;
    t["id"] = row.id;
    t["c1"] = row.c1;
    t["c2"] = row.c2;
    if (report.has_margins) {
      t["N1"] = row.n1;
      t["N2"] = row.n2;
    }
    t["lower"] = row.lower;
    t["tied"] = row.tied;
    t["conventional"] = row.conventional;
    t["mid"] = row.mid;
    t["dirac"] = row.dirac;
    t["rejected"] = row.rejected;
    j["tests"].push_back(std::move(t));
  }
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport report;
  report.alpha = j.at("alpha").get<double>();
  report.lambda = j.at("lambda").get<double>();
  report.has_seed = !j.at("seed").is_null();
  report.seed = report.has_seed ? j.at("seed").get<std::uint64_t>() : 0;
  report.has_margins = j.at("has_margins").get<bool>();
  report.methods = j.at("methods").get<std::vector<std::string>>();
  report.pi0_used = j.at("pi0_used").get<std::vector<double>>();
  report.discoveries = j.at("discoveries").get<std::vector<std::size_t>>();
  for (const nlohmann::json& t : j.at("tests")) {
    TestRow row;
    row.id = t.at("id").get<std::string>();
    row.c1 = t.at("c1").get<long>();
    row.c2 = t.at("c2").get<long>();
    if (report.has_margins) {
      row.n1 = t.at("N1").get<long>();
      row.n2 = t.at("N2").get<long>();
    }
    row.lower = t.at("lower").get<double>();
    row.tied = t.at("tied").get<double>();
    row.conventional = t.at("conventional").get<double>();
    row.mid = t.at("mid").get<double>();
    row.dirac = t.at("dirac").get<bool>();
    row.rejected = t.at("rejected").get<std::vector<bool>>();
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string report_csv(const RunReport& report) {
  std::ostringstream out;
  out << "# alpha=" << format_double(report.alpha)
      << " lambda=" << format_double(report.lambda) << " seed=";
  if (report.has_seed)
    out << report.seed;
  else
    out << "none";
  out << '\n';
  out << "# pi0_used:";
  for (std::size_t k = 0; k < report.methods.size(); ++k)
    out << ' ' << report.methods[k] << '=' << format_double(report.pi0_used[k]);
  out << '\n';
  out << "# discoveries:";
  for (std::size_t k = 0; k < report.methods.size(); ++k)
    out << ' ' << report.methods[k] << '=' << report.discoveries[k];
  out << '\n';

  out << "id,c1,c2";
  if (report.has_margins) out << ",N1,N2";
  out << ",lower,tied,conventional,mid,dirac";
  for (const std::string& m : report.methods) out << ',' << m;
  out << '\n';
  for (const TestRow& row : report.rows) {
    out << row.id << ',' << row.c1 << ',' << row.c2;
    if (report.has_margins) out << ',' << row.n1 << ',' << row.n2;
    out << ',' << format_double(row.lower) << ',' << format_double(row.tied) << ','
        << format_double(row.conventional) << ',' << format_double(row.mid) << ','
        << (row.dirac ? 1 : 0);
    for (bool r : row.rejected) out << ',' << (r ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace midp
