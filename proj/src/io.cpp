#include "fracnls/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracnls {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_timeseries_csv(const std::vector<NormReport>& series,
                          const std::string& path) {
  std::ofstream out = open_out(path);
  out << "t,hN,w,z,sup_u,mass,energy\n";
  for (const NormReport& r : series) {
    out << format_g17(r.t) << ',' << format_g17(r.sobolev_HN) << ','
        << format_g17(r.w_norm) << ',' << format_g17(r.z_norm) << ','
        << format_g17(r.sup_u) << ',' << format_g17(r.mass) << ','
        << format_g17(r.energy) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_snapshot_csv(const ProfileState& state, const PhaseAccumulator& acc,
                        const SpectralGrid& g, const std::string& path) {
  if (static_cast<int>(state.f_hat.size()) != g.M ||
      acc.H.size() != state.f_hat.size())
    throw std::invalid_argument("write_snapshot_csv: size mismatch");
  std::ofstream out = open_out(path);
  out << "# t = " << format_g17(state.t) << '\n';
  out << "xi,re_fhat,im_fhat,H\n";
  for (int i = 0; i < g.M; ++i) {
    out << format_g17(g.xi_nodes[i]) << ','
        << format_g17(state.f_hat[i].real()) << ','
        << format_g17(state.f_hat[i].imag()) << ',' << format_g17(acc.H[i])
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

SnapshotData read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  SnapshotData d;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) d.t = std::stod(line.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    std::istringstream ss(line);
    double xi, re, im, H;
    char c1, c2, c3;
    if (!(ss >> xi >> c1 >> re >> c2 >> im >> c3 >> H))
      throw std::runtime_error("malformed snapshot row in " + path);
    d.xi.push_back(xi);
    d.f_hat.emplace_back(re, im);
    d.H.push_back(H);
  }
  return d;
}

namespace {

struct Affine {
  double lo = 0.0, hi = 1.0;
  double p0 = 0.0, p1 = 1.0;
  double map(double v) const { return p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

void emit_plot_svg(const std::vector<PlotSeries>& series,
                   const std::string& path, bool log_log,
                   const std::string& title) {
  const double W = 960, H = 600;
  const double left = 70, right = 930, top = 50, bottom = 550;

  auto tx = [&](double x) { return log_log ? std::log10(x) : x; };
  bool any = false;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (log_log && (x <= 0.0 || y <= 0.0)) continue;
      const double px = tx(x), py = tx(y);
      if (!any) {
        xmin = xmax = px;
        ymin = ymax = py;
        any = true;
      } else {
        xmin = std::min(xmin, px);
        xmax = std::max(xmax, px);
        ymin = std::min(ymin, py);
        ymax = std::max(ymax, py);
      }
    }
  }
  if (!any) {
    xmin = ymin = 0;
    xmax = ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;

  const Affine ax{xmin, xmax, left, right};
  const Affine ay{ymin, ymax, bottom, top};

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" data-xmode=\""
      << (log_log ? "log10" : "linear") << "\" data-xmin=\""
      << format_g17(xmin) << "\" data-xmax=\"" << format_g17(xmax)
      << "\" data-ymin=\"" << format_g17(ymin) << "\" data-ymax=\""
      << format_g17(ymax) << "\" data-left=\"" << left << "\" data-right=\""
      << right << "\" data-top=\"" << top << "\" data-bottom=\"" << bottom
      << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
      << right - left << "\" height=\"" << bottom - top
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    const double px = ax.map(fx), py = ay.map(fy);
    char lab[32];
    std::snprintf(lab, sizeof(lab), "%.3g", log_log ? std::pow(10, fx) : fx);
    out << "<line x1=\"" << fmt_px(px) << "\" y1=\"" << bottom << "\" x2=\""
        << fmt_px(px) << "\" y2=\"" << bottom + 5
        << "\" stroke=\"black\"/><text x=\"" << fmt_px(px) << "\" y=\""
        << bottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.3g", log_log ? std::pow(10, fy) : fy);
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt_px(py) << "\" x2=\""
        << left << "\" y2=\"" << fmt_px(py)
        << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\""
        << fmt_px(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << lab << "</text>\n";
  }

  int ci = 0;
  for (const auto& s : series) {
    out << "<polyline data-series=\"" << s.name
        << "\" fill=\"none\" stroke=\"" << kPalette[ci % 7]
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (log_log && (x <= 0.0 || y <= 0.0)) continue;
      if (!first) out << ' ';
      out << fmt_px(ax.map(tx(x))) << ',' << fmt_px(ay.map(tx(y)));
      first = false;
    }
    out << "\"/>\n";
    out << "<text x=\"" << right - 6 << "\" y=\"" << top + 18 + 16 * ci
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\""
        << kPalette[ci % 7] << "\">" << s.name << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fracnls
