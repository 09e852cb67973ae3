#include "anosov/report_io.hpp"

#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

namespace anosov {

namespace {

using ojson = nlohmann::ordered_json;

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson grid_json(const CertGrid& g) {
  ojson j;
  j["beta_moduli"] = g.beta_moduli;
  j["beta_phases"] = g.beta_phases;
  j["z_phases"] = g.z_phases;
  j["d_max"] = g.d_max;
  j["d_step"] = g.d_step;
  return j;
}

}  // namespace

std::string to_json(const CertReport& r) {
  ojson j;
  j["min_margin"] = r.min_margin;
  j["max_margin"] = r.max_margin;
  j["min_eta"] = r.min_eta;
  j["min_eta_excess"] = r.min_eta_excess;
  j["max_eta_ratio"] = r.max_eta_ratio;
  j["argmin"] = {{"beta_re", r.argmin.beta_re},
                 {"beta_im", r.argmin.beta_im},
                 {"d", r.argmin.d},
                 {"z_phase", r.argmin.z_phase}};
  j["oracle_dev"] = r.oracle_dev;
  j["cells"] = r.cells;
  j["positive_pairings"] = r.positive_pairings;
  j["negative_pairings"] = r.negative_pairings;
  j["grid"] = grid_json(r.grid);
  return dump(j);
}

std::string to_json(const SolveReport& r, const ReportExtras& extras) {
  ojson j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["residual_norm"] = r.residual_norm;
  j["beta_sup"] = r.beta_sup;
  j["curvature_max"] = r.curvature_max;
  j["residual_history"] = r.residual_history;
  for (const auto& [k, v] : extras) j[k] = v;
  return dump(j);
}

std::string to_json(const GapScan& s) {
  ojson j;
  j["family"] = family_name(s.family);
  j["chi"] = s.chi;
  j["A"] = s.slope_a;
  j["B"] = s.offset_b;
  j["inverse_identity_defect"] = s.inverse_identity_defect;
  j["max_len"] = s.rows.empty() ? 0 : s.rows.back().length;
  j["exhaustive_len"] = s.exhaustive_len;
  j["partial"] = s.partial;
  j["seed"] = s.seed;
  ojson rows = ojson::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"length", r.length},
                    {"count", r.count},
                    {"min_sg12", r.min_sg12},
                    {"med_sg12", r.med_sg12},
                    {"min_sg23", r.min_sg23},
                    {"min_lg12", r.min_lg12},
                    {"cyclic_count", r.cyclic_count}});
  }
  j["rows"] = rows;
  return dump(j);
}

std::string to_json(const ConicReport& r) {
  ojson j;
  j["samples"] = r.samples;
  j["lines_outside"] = r.lines_outside;
  j["planes_meeting_interior"] = r.planes_meeting_interior;
  j["min_line_margin"] = r.min_line_margin;
  j["min_plane_margin"] = r.min_plane_margin;
  j["skipped"] = r.skipped;
  return dump(j);
}

std::string to_json(const FlowReport& flow, const std::vector<PushforwardReport>& pushforwards) {
  ojson j;
  ojson f;
  f["axis"] = flow.axis;
  f["all_nested"] = flow.all_nested;
  ojson steps = ojson::array();
  for (const auto& s : flow.steps) steps.push_back({{"t", s.t}, {"nested", s.nested}, {"estimate", s.estimate}});
  f["steps"] = steps;
  j["flow"] = f;
  ojson pf = ojson::array();
  for (const auto& p : pushforwards) {
    pf.push_back({{"beta_re", p.beta.real()},
                  {"beta_im", p.beta.imag()},
                  {"t_step", p.t_step},
                  {"samples", p.samples},
                  {"inside", p.inside},
                  {"boundary", p.boundary},
                  {"outside", p.outside},
                  {"min_displacement", p.min_displacement},
                  {"worst_theta", p.worst_theta},
                  {"worst_log_lam", p.worst_log_lam}});
  }
  j["pushforward"] = pf;
  return dump(j);
}

void write_csv(std::ostream& os, const GapScan& s) {
  const auto old = os.precision(17);
  os << "length,count,min_sg12,med_sg12,min_sg23,min_lg12\n";
  for (const auto& r : s.rows)
    os << r.length << ',' << r.count << ',' << r.min_sg12 << ',' << r.med_sg12 << ',' << r.min_sg23 << ','
       << r.min_lg12 << '\n';
  os.precision(old);
}

}  // namespace anosov
