#include "qmon/serialization.hpp"

#include <cstdio>
#include <stdexcept>

namespace qmon {

using nlohmann::json;

json operator_to_json(const Operator& op) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < op.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < op.cols(); ++c) {
      row.push_back({op(r, c).real(), op(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Operator operator_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("operator json: expected rows");
  const Eigen::Index n = static_cast<Eigen::Index>(j.size());
  Operator op(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw std::invalid_argument("operator json: not square");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& cell = row.at(c);
      if (!cell.is_array() || cell.size() != 2) {
        throw std::invalid_argument("operator json: cell must be [re, im]");
      }
      op(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return op;
}

json phases_to_json(const PhaseVector& p) {
  json arr = json::array();
  for (double phi : p.phases) arr.push_back(phi);
  return arr;
}

PhaseVector phases_from_json(const json& j) {
  if (!j.is_array() || j.size() < 2) throw std::invalid_argument("phases json: expected >= 2 radians");
  std::vector<double> phi;
  phi.reserve(j.size());
  for (const json& v : j) phi.push_back(v.get<double>());
  const int d = static_cast<int>(phi.size());
  return PhaseVector(d, std::move(phi));
}

json solver_report_to_json(const SolverReport& report) {
  return json{{"d", report.phases.d},
              {"phases", phases_to_json(report.phases)},
              {"residual_norm", report.residual_norm},
              {"achieved_eta", report.achieved_eta},
              {"iterations", report.iterations},
              {"seed", report.seed},
              {"found", report.found},
              {"restarts_used", report.restarts_used}};
}

json fragment_profile_to_json(const FragmentProfile& profile) {
  json rows = json::array();
  for (std::size_t i = 0; i < profile.m_values.size(); ++i) {
    rows.push_back({{"m", profile.m_values[i]},
                    {"mutual_info_bits", profile.mutual_info[i]},
                    {"irreality_bits", profile.irreality_after}});
  }
  return json{{"profile", std::move(rows)},
              {"irreality_after_bits", profile.irreality_after},
              {"effective_epsilon", profile.effective_epsilon}};
}

std::string format_float(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string fragment_profile_to_csv(const FragmentProfile& profile) {
  std::string out = "m,mutual_info_bits,irreality_bits\n";
  for (std::size_t i = 0; i < profile.m_values.size(); ++i) {
    out += std::to_string(profile.m_values[i]);
    out += ',';
    out += format_float(profile.mutual_info[i]);
    out += ',';
    out += format_float(profile.irreality_after);
    out += '\n';
  }
  return out;
}

}  // namespace qmon
