// Acceptance suite: end-to-end checks of the solver and the quadrature lab
// at desk scale, one pass/fail line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracnls/experiments.hpp"
#include "oracles.hpp"

using namespace fracnls;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::chrono::steady_clock::time_point t_start;

void begin() { t_start = std::chrono::steady_clock::now(); }

void report(const char* idx, const char* name, bool pass,
            const std::string& detail) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  std::printf("[%s] %-3s %-22s %s (%.1fs)\n", pass ? "PASS" : "FAIL", idx,
              name, detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

void report(int idx, const char* name, bool pass, const std::string& detail) {
  report(std::to_string(idx).c_str(), name, pass, detail);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out_root() {
  const std::string d = (fs::temp_directory_path() / "fracnls_acceptance").string();
  fs::create_directories(d);
  return d;
}

const char* kBenchmarkBase =
    "L = 64\n"
    "M = 2048\n"
    "c0 = 1\n"
    "eps0 = 0.05\n"
    "xi_center = 1\n"
    "width = 0.5\n"
    "dt = 0.01\n"
    "output_stride = 100\n";

// 1. resonant leading term with constant 8*pi
void criterion_resonance() {
  begin();
  OscillatoryProbe p;
  p.profile.eps0 = 1.0;
  p.profile.xi_center = 2.0;
  p.profile.width = 1.0;
  p.xi = 2.0;
  bool pass = true;
  std::ostringstream detail;
  double prev = 1e9, last = 0.0;
  for (double s : {64.0, 128.0, 256.0, 512.0}) {
    p.s = s;
    const StationaryPhaseResult r = stationary_phase_residual(p);
    pass = pass && (r.rel_residual < prev);
    prev = r.rel_residual;
    last = r.rel_residual;
    detail << (s > 64 ? ", " : "rel residual: ") << r.rel_residual;
  }
  pass = pass && (last <= 0.15);
  detail << "; at s=512: " << last << " <= 0.15 and decreasing";
  report(1, "resonance-constant", pass, detail.str());
}

// 2. pair-integral identity, both variants
void criterion_gaussian_identity() {
  begin();
  bool pass = true;
  std::ostringstream detail;
  for (double N : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double v = gaussian_pair_integral(N, PairVariant::gaussian).real();
    const double closed = 2.0 * M_PI / std::sqrt(1.0 + 4.0 / std::pow(N, 4));
    pass = pass && std::abs(v - closed) <= 1e-12;
  }
  detail << "gaussian matches closed form to 1e-12";
  double prev = 1e9, C = 0.0;
  for (double N : {4.0, 16.0, 64.0}) {
    const double err =
        std::abs(gaussian_pair_integral(N, PairVariant::cutoff) - 2.0 * M_PI);
    pass = pass && (err < prev);
    prev = err;
    C = std::max(C, err * std::sqrt(N));
    detail << "; cutoff err(" << N << ") = " << err;
  }
  detail << "; fitted C = " << C;
  report(2, "gaussian-identity", pass, detail.str());
}

// 3. dispersive-estimate ratio over a family of packets
void criterion_dispersive() {
  begin();
  struct Packet {
    double eps, center, width;
  };
  const Packet packets[] = {{0.05, 1.0, 0.5},
                            {0.05, 1.0, 0.25},
                            {0.05, 2.0, 0.5},
                            {0.05, 0.5, 0.35},
                            {0.05, 1.5, 1.0}};
  bool pass = true;
  double worst = 0.0;
  for (const Packet& pk : packets) {
    InitialDataSpec f;
    f.eps0 = pk.eps;
    f.xi_center = pk.center;
    f.width = pk.width;
    double r10 = 0.0, r100 = 0.0, r1000 = 0.0;
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
      const double r = dispersive_ratio(f, t).ratio;
      worst = std::max(worst, r);
      pass = pass && (r <= 10.0);
      if (t == 10.0) r10 = r;
      if (t == 100.0) r100 = r;
      if (t == 1000.0) r1000 = r;
    }
    // no upward trend: the bound saturates toward a constant; a wrong decay
    // exponent would keep growing through the last decade
    pass = pass && (r1000 <= 2.5 * std::max(r10, r100));
  }
  std::ostringstream detail;
  detail << "5 packets, t in {1,10,100,1000}: max ratio " << worst
         << " <= 10, no upward trend";
  report(3, "dispersive-estimate", pass, detail.str());
}

// 4. linear sup-norm decay exponent; the packet is wide enough in xi that
// its internal dispersion is underway from t = 10 on
void criterion_free_decay() {
  begin();
  InitialDataSpec f;
  f.eps0 = 0.05;
  f.xi_center = 1.0;
  f.width = 1.5;
  std::vector<std::pair<double, double>> series;
  for (double t : {10.0, 17.8, 31.6, 56.2, 100.0, 178.0, 316.0, 562.0, 1000.0})
    series.emplace_back(t, linear_flow_sup(f, t));
  const DecayFit fit = decay_fit(series, 10.0, 1000.0);
  const bool pass = std::abs(fit.exponent + 0.5) <= 0.05;
  std::ostringstream detail;
  detail << "fitted exponent " << fit.exponent << " in -0.5 +/- 0.05 (r2 = "
         << fit.r2 << ")";
  report(4, "free-decay", pass, detail.str());
}

ExperimentRecord conservation_record;  // shared with criterion 9
std::string conservation_dir;

// 5. mass and energy drift on the gauge-invariant benchmark
void criterion_conservation() {
  begin();
  const RunConfig cfg = parse_config(std::string(kBenchmarkBase) +
                                     "T_end = 100\nsnapshot_times = 50, 100\n");
  CommandOptions opt;
  conservation_dir = out_root() + "/conservation_a";
  opt.out_dir = conservation_dir;
  opt.override_horizon = true;  // T = 100 deliberately exceeds T_valid ~ 28
  conservation_record = command_simulate(cfg, opt);
  const bool pass = conservation_record.mass_drift <= 1e-8 &&
                    conservation_record.energy_drift <= 1e-6;
  std::ostringstream detail;
  detail << "mass drift " << conservation_record.mass_drift
         << " <= 1e-8, energy drift " << conservation_record.energy_drift
         << " <= 1e-6";
  report(5, "conservation", pass, detail.str());
}

// 6 + 7 share the long benchmark run
void criteria_scattering_and_norms() {
  begin();
  const RunConfig cfg = parse_config(
      std::string(kBenchmarkBase) +
      "T_end = 2048\nsnapshot_times = 128, 256, 512, 1024, 2048\n");
  CommandOptions opt;
  opt.out_dir = out_root() + "/benchmark_t2048";
  opt.override_horizon = true;
  opt.xi0 = 1.0;
  const ExperimentRecord rec = command_scatter(cfg, opt);
  const ScatteringResult& sc = rec.scattering;

  bool pass_a = true;
  std::ostringstream da;
  for (std::size_t i = 0; i + 1 < sc.residual_series.size(); ++i)
    pass_a = pass_a &&
             (sc.residual_series[i].second > sc.residual_series[i + 1].second);
  pass_a = pass_a && (sc.p1_estimate >= 0.05);
  da << "corrected distances";
  for (const auto& [t, d] : sc.residual_series) da << ' ' << d;
  da << ", p1 = " << sc.p1_estimate;
  if (!pass_a)
    da << " -- the t >= 512 pairs are dominated by the periodic box: the "
          "carrier wraps at t ~ 2L/Lambda'(1) = 256 and the wrapped field "
          "adds a secular phase ~ 2 c0 (mass/2L) t; the same pairs are box-"
          "size independent (genuine) below that time and the full ladder "
          "decreases on a 4x box";
  report("6a", "corrected-ladder", pass_a, da.str());

  begin();
  bool pass_b = true;
  const double first_unc = sc.uncorrected_series.front().second;
  for (const auto& [t, d] : sc.uncorrected_series)
    pass_b = pass_b && (d >= 0.5 * first_unc);
  std::ostringstream db;
  db << "uncorrected distances stay >= 50% of their first value "
     << first_unc;
  report("6b", "uncorrected-floor", pass_b, db.str());

  begin();
  bool pass_c = true;
  std::ostringstream dc;
  if (sc.phase_slope_checks.empty()) {
    pass_c = false;
    dc << "phase slope check missing";
  } else {
    const PhaseSlopeCheck& c = sc.phase_slope_checks.front();
    pass_c = std::abs(c.observed - c.predicted) <= 0.2 * std::abs(c.predicted);
    dc << "log-phase slope at xi0 = " << c.xi0 << ": observed " << c.observed
       << " vs predicted " << c.predicted << " (|rel diff| = "
       << std::abs(c.observed - c.predicted) / std::abs(c.predicted)
       << " <= 0.2)";
  }
  report("6c", "log-phase-slope", pass_c, dc.str());

  begin();
  std::vector<std::pair<double, double>> hn, wn;
  double z0 = rec.series.front().z_norm, zworst = 0.0;
  for (const NormReport& r : rec.series) {
    hn.emplace_back(r.t, r.sobolev_HN);
    wn.emplace_back(r.t, r.w_norm);
    zworst = std::max(zworst, r.z_norm);
  }
  const DecayFit fh = decay_fit(hn, 10.0, 2048.0);
  const DecayFit fw = decay_fit(wn, 10.0, 2048.0);
  const bool pass7 =
      fh.exponent <= 0.05 && fw.exponent <= 0.05 && zworst <= 2.0 * z0;
  std::ostringstream d7;
  d7 << "H^8 growth exponent " << fh.exponent << ", W growth exponent "
     << fw.exponent << " (both <= 0.05), max z / z(0) = " << zworst / z0
     << " <= 2";
  report(7, "norm-control", pass7, d7.str());
}

// 8. padded-transform evaluation vs the direct double sum
void criterion_oracle_equivalence() {
  begin();
  const SpectralGrid g = make_grid(4.0, 16);
  Coefficients c;
  c.c0 = 1.0;
  c.c1 = cd{0.5, -0.25};
  c.c2 = cd{-0.3, 0.1};
  c.c3 = cd{0.2, 0.7};
  std::mt19937_64 rng(2024);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ProfileState st{0.1 + 0.37 * trial, oracles::random_dealiased(g, rng)};
    const auto fast = profile_rhs(st, c, g);
    const auto slow = oracles::brute_force_rhs(st, c, g);
    const double err = oracles::rel_sup_diff(slow, fast);
    worst = std::max(worst, err);
    pass = pass && (err <= 1e-10);
  }
  std::ostringstream detail;
  detail << "10 random dealiased states on M = 16: max relative deviation "
         << worst << " <= 1e-10";
  report(8, "oracle-equivalence", pass, detail.str());
}

// 9. byte-identical reruns
void criterion_determinism() {
  begin();
  const RunConfig cfg = parse_config(std::string(kBenchmarkBase) +
                                     "T_end = 100\nsnapshot_times = 50, 100\n");
  CommandOptions opt;
  opt.out_dir = out_root() + "/conservation_b";
  opt.override_horizon = true;
  command_simulate(cfg, opt);
  const bool ts = slurp(conservation_dir + "/timeseries.csv") ==
                  slurp(opt.out_dir + "/timeseries.csv");
  const bool s50 = slurp(conservation_dir + "/snapshot_t50.csv") ==
                   slurp(opt.out_dir + "/snapshot_t50.csv");
  const bool s100 = slurp(conservation_dir + "/snapshot_t100.csv") ==
                    slurp(opt.out_dir + "/snapshot_t100.csv");
  const bool pass = ts && s50 && s100;
  std::ostringstream detail;
  detail << "timeseries " << (ts ? "identical" : "DIFFER") << ", snapshots "
         << ((s50 && s100) ? "identical" : "DIFFER");
  report(9, "determinism", pass, detail.str());
}

}  // namespace

int main() {
  std::printf("fracnls acceptance suite (tool version %s)\n", tool_version());
  criterion_resonance();
  criterion_gaussian_identity();
  criterion_dispersive();
  criterion_free_decay();
  criterion_conservation();
  criteria_scattering_and_norms();
  criterion_oracle_equivalence();
  criterion_determinism();
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
