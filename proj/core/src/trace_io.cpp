#include "symform/trace_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "symform/error.hpp"

namespace symform {

namespace {

constexpr std::array<const char*, 3> kAxes{"x", "y", "z"};
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 56.0;
constexpr std::size_t kMaxPlotPoints = 1500;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;

  double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double sy(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Frame padded(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double px = 0.05 * (x1 - x0), py = 0.05 * (y1 - y0);
  return {x0 - px, x1 + px, y0 - py, y1 + py};
}

std::size_t stride_for(std::size_t count) { return std::max<std::size_t>(1, count / kMaxPlotPoints); }

void svg_open(std::ostream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << title << "</text>\n";
}

void svg_axes(std::ostream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel,
              const std::string& y0_label, const std::string& y1_label) {
  const double left = kMargin, right = kWidth - kMargin, top = kMargin, bottom = kHeight - kMargin;
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\"" << bottom << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left << "\" y2=\"" << top << "\"/>\n"
      << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<text x=\"" << left << "\" y=\"" << bottom + 16 << "\">" << fixed(f.x0) << "</text>\n"
      << "<text x=\"" << right << "\" y=\"" << bottom + 16 << "\" text-anchor=\"end\">" << fixed(f.x1)
      << "</text>\n"
      << "<text x=\"" << left - 4 << "\" y=\"" << bottom << "\" text-anchor=\"end\">" << y0_label << "</text>\n"
      << "<text x=\"" << left - 4 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << y1_label << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 16 " << kHeight / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n</g>\n";
}

void polyline(std::ostream& out, const std::vector<std::pair<double, double>>& pts, const char* color,
              const char* extra = "") {
  if (pts.empty()) return;
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" " << extra << " points=\"";
  for (const auto& [x, y] : pts) out << fixed(x) << ',' << fixed(y) << ' ';
  out << "\"/>\n";
}

}  // namespace

std::vector<std::string> trace_header(const SimulationTrace& trace) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= trace.n; ++i) {
    for (int a = 0; a < trace.dimension; ++a) h.push_back("p" + std::to_string(i) + "_" + kAxes[static_cast<std::size_t>(a)]);
  }
  for (const auto& e : trace.edges) h.push_back("e" + std::to_string(e.u) + "_" + std::to_string(e.v));
  h.push_back("potential");
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  const auto header = trace_header(trace);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (std::size_t s = 0; s < trace.size(); ++s) {
    out << format_double(trace.times[s]);
    for (Eigen::Index k = 0; k < trace.states[s].size(); ++k) out << ',' << format_double(trace.states[s](k));
    for (Eigen::Index k = 0; k < trace.edge_errors[s].size(); ++k) {
      out << ',' << format_double(trace.edge_errors[s](k));
    }
    out << ',' << format_double(trace.potential[s]) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace) {
  auto out = open_out(path);
  write_trace_csv(out, trace);
}

void write_reference_csv(const std::filesystem::path& path, const std::vector<ReferenceState>& reference) {
  auto out = open_out(path);
  if (reference.empty()) return;
  const auto d = reference.front().r.size();
  out << "t";
  for (Eigen::Index a = 0; a < d; ++a) out << ",r_" << kAxes[static_cast<std::size_t>(a)];
  if (d == 2) {
    out << ",angle";
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out << ",R" << i << j;
  }
  out << ",scale\n";
  for (const auto& ref : reference) {
    out << format_double(ref.t);
    for (Eigen::Index a = 0; a < d; ++a) out << ',' << format_double(ref.r(a));
    if (d == 2) {
      const auto& m = ref.rotation.matrix();
      out << ',' << format_double(ref.rotation.angle().value_or(std::atan2(m(1, 0), m(0, 0))));
    } else {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out << ',' << format_double(ref.rotation.matrix()(i, j));
    }
    out << ',' << format_double(ref.scale) << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ConfigError("line " + std::to_string(line_no), "expected " + std::to_string(table.header.size()) +
                                                               " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw ConfigError("line " + std::to_string(line_no), "not a number: '" + c + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ConfigError("line 1", "missing header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open CSV file");
  return read_csv(in);
}

void write_paths_svg(const std::filesystem::path& path, const SimulationTrace& trace,
                     const std::vector<ReferenceState>* reference) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  const auto extend = [&](double x, double y) {
    x0 = std::min(x0, x); x1 = std::max(x1, x);
    y0 = std::min(y0, y); y1 = std::max(y1, y);
  };
  const int d = trace.dimension;
  for (const auto& p : trace.states)
    for (int i = 0; i < trace.n; ++i) extend(p(d * i), p(d * i + 1));
  if (reference)
    for (const auto& r : *reference) extend(r.r(0), r.r(1));
  const Frame f = padded(x0, x1, y0, y1);

  auto out = open_out(path);
  svg_open(out, "Agent trajectories");
  svg_axes(out, f, "x", "y", fixed(f.y0), fixed(f.y1));
  const std::size_t stride = stride_for(trace.size());
  if (reference && !reference->empty()) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t s = 0; s < reference->size(); s += stride) pts.emplace_back(f.sx((*reference)[s].r(0)), f.sy((*reference)[s].r(1)));
    polyline(out, pts, "#4682b4", "stroke-dasharray=\"6 4\"");
  }
  for (int i = 0; i < trace.n; ++i) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t s = 0; s < trace.size(); s += stride) {
      pts.emplace_back(f.sx(trace.states[s](d * i)), f.sy(trace.states[s](d * i + 1)));
    }
    const auto& last = trace.final_state();
    pts.emplace_back(f.sx(last(d * i)), f.sy(last(d * i + 1)));
    const char* color = kPalette[static_cast<std::size_t>(i) % kPalette.size()];
    polyline(out, pts, color);
    out << "<circle cx=\"" << fixed(pts.back().first) << "\" cy=\"" << fixed(pts.back().second)
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }
  out << "</svg>\n";
}

void write_errors_svg(const std::filesystem::path& path, const SimulationTrace& trace) {
  constexpr double kFloor = 1e-18;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& e : trace.edge_errors)
    for (Eigen::Index k = 0; k < e.size(); ++k) {
      const double v = std::log10(std::max(e(k), kFloor));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!std::isfinite(lo)) { lo = -1; hi = 1; }
  lo = std::floor(lo);
  hi = std::ceil(hi);
  const Frame f = padded(trace.times.front(), trace.times.back(), lo, hi);

  auto out = open_out(path);
  svg_open(out, "Norm of the symmetry errors");
  svg_axes(out, f, "t", "log10 error", "1e" + std::to_string(static_cast<int>(lo)),
           "1e" + std::to_string(static_cast<int>(hi)));
  const std::size_t stride = stride_for(trace.size());
  for (std::size_t k = 0; k < trace.edges.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t s = 0; s < trace.size(); s += stride) {
      pts.emplace_back(f.sx(trace.times[s]),
                       f.sy(std::log10(std::max(trace.edge_errors[s](static_cast<Eigen::Index>(k)), kFloor))));
    }
    polyline(out, pts, kPalette[k % kPalette.size()]);
  }
  out << "</svg>\n";
}

}  // namespace symform
