#include "fockgauge/cli/commands.hpp"

#include "fockgauge/bell.hpp"
#include "fockgauge/cli/csv.hpp"
#include "fockgauge/emergence.hpp"
#include "fockgauge/extensions.hpp"
#include "fockgauge/numerics.hpp"
#include "fockgauge/poposc.hpp"
#include "fockgauge/report.hpp"
#include "fockgauge/single_splitter.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fockgauge::cli {

namespace {

using nlohmann::ordered_json;
using numerics::kPi;
using numerics::kTwoPi;

/// Missing or inconsistent flags: exit 2, like a parse error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Params {
  std::optional<int> nalpha, nbeta, n, m, m1, m2, m3, m4, malpha, mbeta;
  double zeta = 0.0, theta = 0.0;
  std::optional<double> xi, transmission;
  std::optional<int> grid;
  std::uint64_t seed = 1;
  int runs = 500;
  unsigned threads = 0;
  std::string out = "-";
  std::string format = "csv";
  std::string part;
  std::string parity = "odd";
  bool pi_units = false;
};

struct Output {
  Table table{{}};
  ordered_json summary = ordered_json::object();
  std::vector<std::string> notes;
};

int need(const std::optional<int>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required flag ") + flag);
  return *v;
}

// ---- notes for outputs that rest on a corrected formula ------------------

const std::map<std::string, std::string>& note_text() {
  static const std::map<std::string, std::string> t = {
      {"single-splitter-prefactor",
       "single-splitter-prefactor: printed N! prefactor replaced by N_alpha!N_beta!/(m1!m2!)"},
      {"single-splitter-operator-subscript",
       "single-splitter-operator-subscript: first output operator read as (a_alpha + i a_beta)/sqrt2"},
      {"peak-formulas-swapped",
       "peak-formulas-swapped: peak on Lambda = 0 sits at lambda = 2 atan sqrt(m2/m1), on lambda = 0 at "
       "Lambda = 2 atan sqrt(m1/m2)"},
      {"cat-peak-factor-two", "cat-peak-factor-two: phi0 = 2 atan sqrt(m2/m1)"},
      {"no-phase-closed-form",
       "no-phase-closed-form: printed closed form fails normalization; product of binomials at 1/2 adopted"},
      {"interference-marginal-prefactor",
       "interference-marginal-prefactor: marginal carries the missing 1/(N-M)!"},
      {"residual-state-operators",
       "residual-state-operators: residual state built from a_alpha, a_beta acting on the sources"},
      {"loss-caption-counts",
       "loss-caption-counts: printed count pair exceeds the detected total; m2 chosen so m1 + m2 <= N_D"},
      {"double-po-prefactor",
       "double-po-prefactor: integral and sum forms use the oracle-checked prefactors"},
      {"three-source-operator", "three-source-operator: third factor acts on a_gamma"},
      {"three-source-caption-arithmetic",
       "three-source-caption-arithmetic: side counts obey m_alpha + m_beta + m_gamma = 3N - M"},
  };
  return t;
}

std::string note(const std::string& id) { return note_text().at(id); }

// ---- shared helpers -----------------------------------------------------

modes::DoubleFock source(const Params& p) {
  if (p.nalpha || p.nbeta) return {need(p.nalpha, "--nalpha"), need(p.nbeta, "--nbeta")};
  const int n = need(p.n, "--n (or --nalpha and --nbeta)");
  require(n >= 0 && n % 2 == 0, "--n must be even when it sets N_alpha = N_beta = N/2");
  return {n / 2, n / 2};
}

int grid_size(const Params& p, int fallback) {
  const int g = p.grid.value_or(fallback);
  require(g >= 2, "--grid must be >= 2");
  return g;
}

double node(int k, int count) { return -kPi + kTwoPi * k / count; }

Table field_table(const AngleField& f) {
  Table t({"Lambda", "lambda", "value"});
  for (int a = 0; a < f.size(); ++a)
    for (int b = 0; b < f.size(); ++b) t.add({f.Lambda(a), f.lambda(b), f.normalized(a, b)});
  return t;
}

Table slice_table(const poposc::PoDistribution& d) {
  Table t({"m_alpha", "m_beta", "prob"});
  const int side = d.n_alpha + d.n_beta - d.m1 - d.m2;
  for (std::size_t k = 0; k < d.m_alpha.size(); ++k)
    t.add({std::int64_t{d.m_alpha[k]}, std::int64_t{side - d.m_alpha[k]}, d.prob[k]});
  return t;
}

extensions::Record4 record4(const Params& p) {
  return {need(p.m1, "--m1"), need(p.m2, "--m2"), need(p.m3, "--m3"), need(p.m4, "--m4")};
}

// ---- emergence ----------------------------------------------------------

Output emergence_run(const Params& p) {
  const int m = p.m.value_or(200);
  const auto sample = emergence::sample_positions(m, p.seed, 0);
  const auto prof = emergence::posterior_profile(sample, grid_size(p, 4096));
  Output o;
  o.table = Table({"lambda", "value"});
  for (std::size_t k = 0; k < prof.lambda.size(); ++k) o.table.add({prof.lambda[k], prof.values[k]});
  o.summary = {{"m", m}, {"lambda0", prof.lambda0}, {"fwhm", prof.fwhm}};
  return o;
}

Output emergence_ensemble(const Params& p) {
  const int m = p.m.value_or(200);
  const auto runs = emergence::run_ensemble(p.runs, m, p.seed, grid_size(p, 4096));
  Output o;
  o.table = Table({"run", "lambda0", "fwhm"});
  std::vector<double> l0, w;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    o.table.add({static_cast<std::int64_t>(r), runs[r].lambda0, runs[r].fwhm});
    l0.push_back(runs[r].lambda0);
    w.push_back(runs[r].fwhm);
  }
  o.summary = {{"m", m},
               {"runs", p.runs},
               {"ks_uniform", emergence::ks_uniform(l0)},
               {"median_fwhm", emergence::median(w)}};
  return o;
}

// ---- single splitter ----------------------------------------------------

Output single_dist(const Params& p) {
  const auto src = source(p);
  const auto d = single_splitter::prob_single_distribution(src);
  Output o;
  o.table = Table({"m1", "m2", "prob"});
  double total = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    o.table.add({static_cast<std::int64_t>(k), static_cast<std::int64_t>(src.total() - k), d[k]});
    total += d[k];
  }
  o.summary = {{"total", total}};
  o.notes = {note("single-splitter-prefactor"), note("single-splitter-operator-subscript")};
  return o;
}

Output single_field(const Params& p) {
  const auto src = source(p);
  const int m1 = need(p.m1, "--m1");
  if (p.m2) require(m1 + *p.m2 == src.total(), "single field: need m1 + m2 = N");
  Output o;
  o.table = field_table(
      single_splitter::integrand_field(src, m1, numerics::PeriodicGrid(grid_size(p, 128), 2)));
  o.notes = {note("single-splitter-prefactor")};
  return o;
}

Output single_rphi(const Params& p) {
  const int m1 = need(p.m1, "--m1"), m2 = need(p.m2, "--m2");
  const int nb = p.nbeta.value_or(0);
  const int g = grid_size(p, 512);
  auto r2 = [&](double phi) { return std::norm(single_splitter::r_of_phi(m1, m2, nb, phi)); };
  Output o;
  o.table = Table({"phi", "r_abs2"});
  for (int k = 0; k < g; ++k) o.table.add({node(k, g), r2(node(k, g))});
  // The two maxima sit symmetrically about pi/2.
  const auto best = numerics::maximize_scalar(r2, kPi / 2, 3 * kPi / 2, 1e-10, 256);
  o.summary = {{"phi0", best.argmax - kPi / 2}};
  o.notes = {note("single-splitter-operator-subscript")};
  return o;
}

// ---- bell ---------------------------------------------------------------

int bell_n(const Params& p) {
  if (p.nalpha || p.nbeta) {
    const auto src = source(p);
    require(src.n_alpha == src.n_beta, "bell: need N_alpha = N_beta");
    return src.total();
  }
  return need(p.n, "--n");
}

Output bell_prob(const Params& p) {
  const int n = bell_n(p);
  const auto rec = record4(p);
  const int m = rec[0] + rec[1] + rec[2] + rec[3];
  const double pr = bell::prob_bell({p.zeta, p.theta, n, m}, {{rec.begin(), rec.end()}});
  Output o;
  o.table = Table({"m1", "m2", "m3", "m4", "prob"});
  o.table.add({std::int64_t{rec[0]}, std::int64_t{rec[1]}, std::int64_t{rec[2]}, std::int64_t{rec[3]}, pr});
  return o;
}

Output bell_field(const Params& p) {
  const int n = bell_n(p);
  const auto rec = record4(p);
  const int m = rec[0] + rec[1] + rec[2] + rec[3];
  Output o;
  o.table = field_table(bell::integrand_field({p.zeta, p.theta, n, m}, {{rec.begin(), rec.end()}},
                                              numerics::PeriodicGrid(grid_size(p, 128), 2)));
  return o;
}

Output bell_correlator(const Params& p) {
  const int n = bell_n(p);
  const int m = p.m.value_or(n);
  const int g = grid_size(p, 32);
  Output o;
  o.table = Table({"zeta_plus_theta", "correlator", "closed_form"});
  double worst = 0.0;
  for (int k = 0; k < g; ++k) {
    const double s = node(k, g);
    const double e = bell::correlator({s, 0.0, n, m});
    const double c = bell::correlator_closed_form(n, s, 0.0);
    o.table.add({s, e, c});
    worst = std::max(worst, std::abs(e - c));
  }
  o.summary = {{"n", n}, {"m", m}, {"max_abs_deviation_from_closed_form", worst}};
  return o;
}

Output bell_qmax(const Params& p) {
  const int n = bell_n(p);
  const int m = p.m.value_or(n);
  require(m == n || m == n - 1, "bell qmax: --m must be N or N - 1");
  std::function<double(double)> e = [n](double x) { return bell::correlator_closed_form(n, 2 * x, 0.0); };
  if (m != n) e = [n, m](double x) { return bell::correlator({2 * x, 0.0, n, m}); };
  const auto best = m == n ? bell::maximize_chsh(n) : bell::maximize_chsh_lossy(n);
  const int g = grid_size(p, 256);
  Output o;
  o.table = Table({"xi", "q"});
  for (int k = 1; k <= g; ++k) {
    const double x = 0.5 * kPi * k / g;
    o.table.add({x, 3 * e(x) - e(3 * x)});
  }
  o.summary = {{"n", n},
               {"m", m},
               {"xi_star", best.xi_star},
               {"q_star", best.q_star},
               {"xi_star_sqrt_n", best.xi_star * std::sqrt(static_cast<double>(n))}};
  return o;
}

Output bell_diagnostic(const Params& p) {
  require(p.m.value_or(2) == 2, "bell diagnostic: only M = 2 is defined");
  const int g = grid_size(p, 64);
  Output o;
  o.table = Table({"Lambda", "lambda", "l_qu", "l_cl"});
  double worst_qu = 0.0, worst_cl = 0.0;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      const double L = node(a, g), l = node(b, g);
      const auto d = bell::normalization_diagnostic(2, p.zeta, p.theta, L, l);
      o.table.add({L, l, d.l_qu, d.l_cl});
      worst_qu = std::max(worst_qu, std::abs(d.l_qu - 8 * std::cos(L) * std::cos(L)));
      worst_cl = std::max(worst_cl, std::abs(d.l_cl - 8));
    }
  o.summary = {{"max_dev_l_qu", worst_qu}, {"max_dev_l_cl", worst_cl}};
  return o;
}

// ---- population oscillations --------------------------------------------

Output po_slice(const Params& p) {
  const auto src = source(p);
  const auto d = poposc::po_slice(src, need(p.m1, "--m1"), need(p.m2, "--m2"));
  Output o;
  o.table = slice_table(d);
  double total = 0.0;
  for (double x : d.prob) total += x;
  o.summary = {{"slice_total", total}};
  return o;
}

Output po_field(const Params& p) {
  const int m1 = need(p.m1, "--m1"), m2 = need(p.m2, "--m2");
  const int damping = p.n ? *p.n - m1 - m2 : 0;
  require(damping >= 0, "po field: need m1 + m2 <= N");
  const numerics::PeriodicGrid grid(grid_size(p, 128), 2);
  auto f = sample_field(
      grid,
      [&](double L, double l) {
        return poposc::f_value(m1, m2, L, l) * numerics::LogWeight::from_value(std::cos(L)).pow(damping);
      },
      "F");
  Output o;
  o.table = field_table(f);
  o.notes = {note("peak-formulas-swapped")};
  return o;
}

Output po_dlam(const Params& p) {
  const int m1 = need(p.m1, "--m1");
  const int m = p.m ? *p.m : m1 + need(p.m2, "--m2 (or --m)");
  const int g = grid_size(p, 256);
  std::vector<double> L(g);
  for (int k = 0; k < g; ++k) L[k] = node(k, g);
  const auto d = poposc::d_of_lambda_profile(m1, m, L);
  Output o;
  o.table = Table({"Lambda", "d"});
  for (int k = 0; k < g; ++k) o.table.add({L[k], d[k]});
  return o;
}

Output po_pclass(const Params& p) {
  const int m1 = need(p.m1, "--m1");
  const int m = p.m ? *p.m : m1 + need(p.m2, "--m2 (or --m)");
  const int n = p.n.value_or(m);
  const int g = grid_size(p, 256);
  Output o;
  o.table = Table({"lambda", "p_class"});
  for (int k = 0; k <= g; ++k) {
    const double l = -kPi + kTwoPi * k / g;
    o.table.add({l, poposc::p_class_lambda(m1, m, n, l)});
  }
  o.summary = {{"peak", poposc::p_class_peak(m1, m, n)}};
  return o;
}

Output po_peaks(const Params& p) {
  const int m1 = need(p.m1, "--m1"), m2 = need(p.m2, "--m2");
  Output o;
  o.table = Table({"Lambda", "lambda", "sign", "local_max_abs_f"});
  for (const auto& pk : poposc::f_peaks(m1, m2))
    o.table.add({pk.Lambda, pk.lambda, std::int64_t{pk.sign},
                 std::int64_t{poposc::is_local_max_abs_f(m1, m2, pk, 1e-3) ? 1 : 0}});
  o.notes = {note("peak-formulas-swapped")};
  return o;
}

Output po_cat(const Params& p) {
  const int m1 = need(p.m1, "--m1"), m2 = need(p.m2, "--m2");
  const int g = grid_size(p, 512);
  Output o;
  o.table = Table({"phi", "t"});
  for (int k = 0; k < g; ++k) o.table.add({node(k, g), poposc::cat_envelope(m1, m2, node(k, g))});
  const double phi0 = poposc::cat_peak(m1, m2);
  o.summary = {{"phi0", phi0}, {"phi0_over_pi", phi0 / kPi}, {"relative_sign", m2 % 2 ? -1 : 1}};
  o.notes = {note("cat-peak-factor-two")};
  return o;
}

// ---- extensions ---------------------------------------------------------

Output ext_no_phase(const Params& p) {
  const auto src = source(p);
  const int m = need(p.m, "--m");
  require(m >= 0 && m <= src.total(), "ext no-phase: need 0 <= M <= N");
  const int side = src.total() - m;
  Output o;
  o.table = Table({"m_alpha", "m_beta", "direct", "printed", "derived"});
  for (int ma = 0; ma <= side; ++ma) {
    const int mb = side - ma;
    if (ma > src.n_alpha || mb > src.n_beta) continue;
    o.table.add({std::int64_t{ma}, std::int64_t{mb}, extensions::prob_no_phase(src, m, ma, mb),
                 extensions::prob_no_phase_printed(src, m, ma, mb),
                 extensions::prob_no_phase_derived(src, m, ma, mb)});
  }
  o.notes = {note("no-phase-closed-form")};
  return o;
}

Output ext_no_pop(const Params& p) {
  const auto src = source(p);
  const int m = need(p.m, "--m");
  Output o;
  o.table = Table({"m1", "m2", "prob", "classical"});
  for (int m1 = 0; m1 <= m; ++m1)
    o.table.add({std::int64_t{m1}, std::int64_t{m - m1}, extensions::prob_no_population(src, m, m1),
                 poposc::classical_interference(m1, m - m1)});
  o.notes = {note("interference-marginal-prefactor")};
  return o;
}

Output ext_losses(const Params& p) {
  const int nd = need(p.n, "--n");
  if (!p.transmission) throw UsageError("missing required flag --transmission");
  const auto res = extensions::po_with_losses(nd, need(p.m1, "--m1"), need(p.m2, "--m2"), *p.transmission);
  auto slice = res.slice;
  double total = 0.0;
  for (double x : slice.prob) total += x;
  require(total > 0.0, "ext losses: slice has zero weight");
  for (double& x : slice.prob) x /= total;
  Output o;
  o.table = slice_table(slice);
  o.summary = {{"mean_lost", res.mean_lost}, {"strata_used", res.strata_used}};
  o.notes = {note("loss-caption-counts")};
  return o;
}

Output ext_parity(const Params& p) {
  const auto src = source(p);
  const int m = need(p.m, "--m");
  const auto par = p.parity == "even" ? extensions::Parity::even : extensions::Parity::odd;
  const auto res = extensions::parity_selected_field(src, m, par, numerics::PeriodicGrid(grid_size(p, 128), 2));
  Output o;
  if (p.part == "landscape") {
    o.table = field_table(res.landscape);
  } else {
    o.table = slice_table(res.pattern);
  }
  return o;
}

Output ext_double_po(const Params& p) {
  const auto src = source(p);
  const auto rec = record4(p);
  Output o;
  if (p.part == "landscape") {
    o.table = field_table(
        extensions::double_landscape(rec, p.zeta, p.theta, numerics::PeriodicGrid(grid_size(p, 128), 2)));
  } else {
    o.table = slice_table(extensions::po_double_slice(src, rec, p.zeta, p.theta));
  }
  o.notes = {note("double-po-prefactor")};
  return o;
}

// ---- three sources ------------------------------------------------------

Output three_map(const Params& p) {
  const int n = need(p.n, "--n"), m = need(p.m, "--m");
  const auto map = emergence::three_population_map(n, m, p.seed);
  Output o;
  o.table = Table({"m_alpha", "m_beta", "m_gamma", "prob"});
  for (int ma = 0; ma <= n; ++ma)
    for (int mb = 0; mb <= n; ++mb) {
      const int mg = map.remaining - ma - mb;
      if (mg < 0 || mg > n) continue;
      o.table.add({std::int64_t{ma}, std::int64_t{mb}, std::int64_t{mg}, map.at(ma, mb)});
    }
  o.summary = {{"remaining", map.remaining},
               {"autocorr_1_-1", emergence::directional_autocorrelation(map, 1, -1)},
               {"autocorr_1_0", emergence::directional_autocorrelation(map, 1, 0)},
               {"autocorr_0_1", emergence::directional_autocorrelation(map, 0, 1)},
               {"autocorr_1_1", emergence::directional_autocorrelation(map, 1, 1)}};
  o.notes = {note("three-source-operator"), note("three-source-caption-arithmetic")};
  return o;
}

Output three_oracle(const Params& p) {
  const int n = need(p.n, "--n"), m = need(p.m, "--m");
  require(n <= emergence::kThreeOracleCap, "three oracle: --n must be <= 3");
  const auto map = emergence::three_population_map(n, m, p.seed);
  Output o;
  o.table = Table({"m_alpha", "m_beta", "m_gamma", "recurrence", "integral"});
  double worst = 0.0;
  for (int ma = 0; ma <= n; ++ma)
    for (int mb = 0; mb <= n; ++mb) {
      const int mg = map.remaining - ma - mb;
      if (mg < 0 || mg > n) continue;
      const double r = emergence::three_prob_recurrence(n, map.sample, ma, mb);
      const double i = emergence::three_prob_integral(n, map.sample, ma, mb);
      o.table.add({std::int64_t{ma}, std::int64_t{mb}, std::int64_t{mg}, r, i});
      worst = std::max(worst, std::abs(r - i));
    }
  o.summary = {{"max_abs_difference", worst}};
  o.notes = {note("three-source-operator")};
  return o;
}

// ---- report -------------------------------------------------------------

Output report_table(const Params&) {
  Output o;
  o.table = Table({"id", "location", "printed", "adopted", "evidence", "confirmed"});
  int confirmed = 0;
  const auto entries = report::build_report();
  for (const auto& d : entries) {
    o.table.add({d.id, d.location, d.printed, d.adopted, d.evidence, std::int64_t{d.confirmed ? 1 : 0}});
    confirmed += d.confirmed;
  }
  o.summary = {{"entries", entries.size()}, {"confirmed", confirmed}};
  return o;
}

// ---- driver -------------------------------------------------------------

struct Leaf {
  const char* group;
  const char* name;
  const char* help;
  Output (*handler)(const Params&);
};

const std::vector<Leaf>& leaves() {
  static const std::vector<Leaf> l = {
      {"emergence", "run", "posterior over lambda after m sequential detections", emergence_run},
      {"emergence", "ensemble", "lambda0 and FWHM over independent seeded runs", emergence_ensemble},
      {"single", "dist", "P(m1, N - m1) for one beam splitter", single_dist},
      {"single", "field", "(Lambda, lambda) integrand for one outcome", single_field},
      {"single", "rphi", "|R(phi)|^2 over phi", single_rphi},
      {"bell", "prob", "probability of one record of the double interferometer", bell_prob},
      {"bell", "field", "(Lambda, lambda) integrand for one record", bell_field},
      {"bell", "correlator", "parity correlator vs zeta + theta", bell_correlator},
      {"bell", "qmax", "BCHSH combination along the optimal family of settings", bell_qmax},
      {"bell", "diagnostic", "M = 2 normalization sums L_qu and L_cl", bell_diagnostic},
      {"po", "slice", "P(m1, m2, m_alpha, m_beta) vs m_alpha", po_slice},
      {"po", "field", "F(Lambda, lambda), optionally damped by cos^(N-M) Lambda", po_field},
      {"po", "dlam", "D(Lambda)/2^M", po_dlam},
      {"po", "pclass", "p_class(lambda)/2^M", po_pclass},
      {"po", "peaks", "extrema of |F| on the symmetry lines", po_peaks},
      {"po", "cat", "cat envelope T(phi)", po_cat},
      {"ext", "no-phase", "side counts with no interference measurement", ext_no_phase},
      {"ext", "no-pop", "interference counts with the side counts summed", ext_no_pop},
      {"ext", "losses", "PO slice with lost particles summed out", ext_losses},
      {"ext", "parity", "parity-selected landscape or pattern (--part)", ext_parity},
      {"ext", "double-po", "two interferometers plus side counters (--part)", ext_double_po},
      {"three", "map", "side-count map after m detections from three sources", three_map},
      {"three", "oracle", "recurrence vs four-angle integral at small n", three_oracle},
  };
  return l;
}

void add_flags(CLI::App* app, Params& p) {
  app->add_option("--nalpha", p.nalpha, "population of source alpha");
  app->add_option("--nbeta", p.nbeta, "population of source beta");
  app->add_option("--n", p.n, "total population (or detected total / per-source population where noted)");
  app->add_option("--m", p.m, "number of measured particles");
  app->add_option("--m1", p.m1);
  app->add_option("--m2", p.m2);
  app->add_option("--m3", p.m3);
  app->add_option("--m4", p.m4);
  app->add_option("--malpha", p.malpha);
  app->add_option("--mbeta", p.mbeta);
  app->add_option("--zeta", p.zeta, "radians");
  app->add_option("--theta", p.theta, "radians");
  app->add_option("--xi", p.xi, "radians");
  app->add_option("--transmission", p.transmission);
  app->add_option("--grid", p.grid, "points per axis");
  app->add_option("--seed", p.seed);
  app->add_option("--runs", p.runs);
  app->add_option("--threads", p.threads, "worker threads (0 = hardware)");
  app->add_option("--out", p.out, "output path, - for stdout");
  app->add_option("--format", p.format)->check(CLI::IsMember({"csv", "json", "md"}));
  app->add_option("--part", p.part)->check(CLI::IsMember({"pattern", "landscape"}));
  app->add_option("--parity", p.parity)->check(CLI::IsMember({"odd", "even"}));
  app->add_flag("--pi-units", p.pi_units, "angles given in units of pi");
}

ordered_json params_json(const Params& p) {
  ordered_json j = ordered_json::object();
  auto put = [&](const char* k, const std::optional<int>& v) {
    if (v) j[k] = *v;
  };
  put("nalpha", p.nalpha);
  put("nbeta", p.nbeta);
  put("n", p.n);
  put("m", p.m);
  put("m1", p.m1);
  put("m2", p.m2);
  put("m3", p.m3);
  put("m4", p.m4);
  put("malpha", p.malpha);
  put("mbeta", p.mbeta);
  j["zeta"] = p.zeta;
  j["theta"] = p.theta;
  if (p.xi) j["xi"] = *p.xi;
  if (p.transmission) j["transmission"] = *p.transmission;
  put("grid", p.grid);
  j["seed"] = p.seed;
  j["runs"] = p.runs;
  j["threads"] = p.threads;
  j["out"] = p.out;
  j["format"] = p.format;
  if (!p.part.empty()) j["part"] = p.part;
  j["parity"] = p.parity;
  return j;
}

void emit_table(std::ostream& os, const Table& t, const std::string& format) {
  if (format == "json")
    write_json(os, t);
  else
    write_csv(os, t);
}

std::string report_markdown() { return report::render_markdown(report::build_report()); }

int execute(const std::string& command, Output (*handler)(const Params&), Params p,
            const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  if (p.pi_units) {
    p.zeta *= kPi;
    p.theta *= kPi;
    if (p.xi) *p.xi *= kPi;
  }
  if (p.threads) numerics::set_worker_count(p.threads);

  Output o;
  std::string markdown;
  if (command == "report" && p.format == "md") {
    markdown = report_markdown();
  } else {
    if (p.format == "md") throw UsageError("--format md is only available for report");
    o = handler(p);
  }

  std::ostringstream body;
  if (!markdown.empty())
    body << markdown;
  else
    emit_table(body, o.table, p.format);

  if (p.out == "-") {
    out << body.str();
  } else {
    std::ofstream f(p.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.out);
    f << body.str();
  }

  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  ordered_json manifest;
  manifest["config"] = {{"command", command}, {"argv", args}, {"parameters", params_json(p)}};
  manifest["version"] = FOCKGAUGE_VERSION;
  manifest["runtime_ms"] = ms;
  manifest["notes"] = o.notes;
  manifest["summary"] = o.summary;
  if (p.out == "-") {
    err << manifest.dump(2) << '\n';
  } else {
    std::ofstream f(p.out + ".manifest.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.out + ".manifest.json");
    f << manifest.dump(2) << '\n';
  }
  return 0;
}

/// argv from a manifest with --out replaced by the given path.
std::vector<std::string> replay_args(const std::string& manifest_path, const std::optional<std::string>& out) {
  std::ifstream f(manifest_path);
  if (!f) throw UsageError("cannot read manifest " + manifest_path);
  ordered_json j;
  try {
    j = ordered_json::parse(f);
  } catch (const std::exception& e) {
    throw UsageError("malformed manifest: " + std::string(e.what()));
  }
  if (!j.contains("config") || !j["config"].contains("argv")) throw UsageError("manifest has no config.argv");
  auto args = j["config"]["argv"].get<std::vector<std::string>>();
  if (!args.empty() && args[0] == "replay") throw UsageError("manifest records a replay");
  if (out) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--out") {
        ++i;
        continue;
      }
      if (args[i].rfind("--out=", 0) == 0) continue;
      kept.push_back(args[i]);
    }
    kept.push_back("--out");
    kept.push_back(*out);
    args = std::move(kept);
  }
  return args;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fockgauge: measurement statistics of interfering Fock-state condensates"};
  app.set_version_flag("--version", FOCKGAUGE_VERSION);
  app.require_subcommand(1);

  Params p;
  std::string chosen;
  Output (*handler)(const Params&) = nullptr;
  std::map<std::string, CLI::App*> groups;
  std::vector<std::pair<CLI::App*, const Leaf*>> subs;
  for (const auto& leaf : leaves()) {
    auto& g = groups[leaf.group];
    if (!g) {
      g = app.add_subcommand(leaf.group);
      g->require_subcommand(1);
    }
    auto* s = g->add_subcommand(leaf.name, leaf.help);
    add_flags(s, p);
    subs.emplace_back(s, &leaf);
  }
  auto* rep = app.add_subcommand("report", "misprint ledger with recomputed evidence");
  add_flags(rep, p);

  std::string manifest_path;
  std::optional<std::string> replay_out;
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path)->required();
  replay->add_option("--out", replay_out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help / --version
      app.exit(e, out, err);
      return 0;
    }
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (replay->parsed()) return run(replay_args(manifest_path, replay_out), out, err);
    for (const auto& [s, leaf] : subs)
      if (s->parsed()) {
        chosen = std::string(leaf->group) + " " + leaf->name;
        handler = leaf->handler;
      }
    if (rep->parsed()) {
      chosen = "report";
      handler = report_table;
    }
    return execute(chosen, handler, p, args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace fockgauge::cli
