// Prints one PASS/FAIL line per acceptance criterion on stdout; details go to
// stderr. Exit status is 0 when every failing criterion is a documented
// known deviation.
#include <chrono>
#include <iostream>
#include <set>

#include "sl2pc/reports.hpp"

using namespace sl2pc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  int id;
  std::string title;
  bool pass = false;
  std::string detail;
};

// Runs the named checks; known deviations are evaluated for real here.
Criterion from_checks(int id, const std::string& title, const std::vector<std::string>& ids, double budget_s,
                      const Config& cfg) {
  Criterion c{id, title};
  std::vector<CheckDef> defs;
  for (auto& s : suite_names())
    for (auto& d : suite_checks(s)) defs.push_back(d);
  auto t0 = Clock::now();
  c.pass = true;
  for (auto& name : ids) {
    auto r = run_check(find_check(defs, name), cfg, false);
    c.pass &= r.status == Status::pass;
    std::cerr << "  [" << id << "] " << status_name(r.status) << " " << r.id << " measured=" << r.measured
              << " tol=" << r.tolerance << (r.note.empty() ? "" : "  (" + r.note + ")") << "\n";
  }
  double el = seconds_since(t0);
  if (budget_s > 0 && el > budget_s) {
    c.pass = false;
    c.detail = "over budget ";
  }
  c.detail += checks::fmt(el) + "s";
  if (budget_s > 0) c.detail += " / " + checks::fmt(budget_s) + "s";
  return c;
}

Criterion cohomology_criterion(const Config& cfg) {
  Criterion c{1, "formal cohomology Betti table, d <= 7"};
  auto s = derive_structure_constants();
  auto t0 = Clock::now();
  double t6 = 0;
  c.pass = true;
  std::vector<CohomologySlice> slices;
  for (int d = 0; d <= 7; ++d) {
    slices.push_back(cohomology_slice(s, d, cfg.degree_cap, 1));
    for (int k = 0; k <= 6; ++k) c.pass &= slices.back().betti[k] == expected_betti(k, d);
    if (d == 6) t6 = seconds_since(t0);
  }
  std::cerr << betti_table_text(slices);
  if (t6 > 300) c.pass = false;
  c.detail = "d<=6 in " + checks::fmt(t6) + "s / 300s, d<=7 in " + checks::fmt(seconds_since(t0)) + "s";
  return c;
}

}  // namespace

int main() {
  Config cfg;
  // criterion 7 contains the relation [Y1,Y2] = Y2, which is false
  const std::set<int> known = {7};
  std::vector<Criterion> out;
  out.push_back(cohomology_criterion(cfg));
  out.push_back(from_checks(2, "exact bracket identities",
                            {"exterior.pi1_pi1", "exterior.pi2_pi2", "exterior.pi1_pi2",
                             "exterior.cartan_cocycles_closed", "exterior.cartan_contractions",
                             "exterior.euler_identity"},
                            10, cfg));
  out.push_back(from_checks(3, "flow closed form vs RK4",
                            {"flow.rk4_agreement", "flow.r2_closed_form", "flow.commutator_closed_form",
                             "flow.casimir_conserved"},
                            60, cfg));
  out.push_back(from_checks(4, "retraction", {"flow.retract_is_limit", "flow.retract_normal", "flow.retract_radius"},
                            60, cfg));
  out.push_back(from_checks(5, "homotopy identities", {"homotopy.finite_t", "homotopy.infinite_t", "homotopy.su2"},
                            600, cfg));
  out.push_back(from_checks(6, "desingularization identities",
                            {"skeleton.casimir_square", "skeleton.phi_pullback", "skeleton.omega_pullbacks",
                             "skeleton.w_fields_related"},
                            30, cfg));
  out.push_back(from_checks(7, "norm-ring exactness",
                            {"norm_ring.projections", "norm_ring.y_linear_relation", "norm_ring.y_bracket_as_stated",
                             "norm_ring.parity_reconstruction"},
                            10, cfg));
  out.push_back(from_checks(8, "quantitative-bound sweeps",
                            {"flow.eps_bound_q1", "flow.eps_bound_q2", "flow.eps_bound_q3", "flow.theta_bounds",
                             "slb.skeleton_homotopy"},
                            0, cfg));

  int rc = 0;
  for (auto& c : out) {
    std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.title << " (" << c.detail << ")\n";
    if (!c.pass && !known.count(c.id)) rc = 1;
  }
  for (auto& c : out)
    if (!c.pass && known.count(c.id)) std::cerr << "criterion " << c.id << " fails as a known deviation\n";
  return rc;
}
