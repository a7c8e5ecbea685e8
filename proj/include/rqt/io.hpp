#pragma once

// Small output helpers: full-precision number formatting, file writing and
// a minimal static SVG line plot. CSV files are UTF-8 with LF line endings
// and 17 significant digits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqt {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

// One named curve of (x, y) samples.
struct Curve {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Fixed-axis ([x0,x1] x [0,1]) polyline plot; no interactivity.
inline std::string svg_plot(const std::string& title, const std::vector<Curve>& curves,
                            double x0, double x1) {
  const int w = 640, h = 480, ml = 60, mr = 20, mt = 40, mb = 50;
  const double pw = w - ml - mr, ph = h - mt - mb;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return mt + (1.0 - y) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
       "\" height=\"" + std::to_string(h) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(w / 2) + "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
  // axes
  s += "<rect x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(mt) + "\" width=\"" +
       std::to_string(static_cast<int>(pw)) + "\" height=\"" + std::to_string(static_cast<int>(ph)) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = k / 4.0;
    char lab[16];
    std::snprintf(lab, sizeof(lab), "%.2f", y);
    s += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" + std::to_string(py(y) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + lab + "</text>\n";
    const double x = x0 + k * (x1 - x0) / 4.0;
    std::snprintf(lab, sizeof(lab), "%.3f", x);
    s += "<text x=\"" + std::to_string(px(x)) + "\" y=\"" + std::to_string(h - mb + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + lab +
         "</text>\n";
  }
  s += "<text x=\"" + std::to_string(w / 2) + "\" y=\"" + std::to_string(h - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">r</text>\n";
  int ci = 0;
  for (const Curve& c : curves) {
    std::string pts;
    for (const auto& [x, y] : c.points) {
      char p[64];
      std::snprintf(p, sizeof(p), "%.2f,%.2f ", px(x), py(std::min(1.0, std::max(0.0, y))));
      pts += p;
    }
    const char* col = colors[ci % 5];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.5\" points=\"" +
         pts + "\"/>\n";
    s += "<text x=\"" + std::to_string(ml + 10) + "\" y=\"" + std::to_string(mt + 18 + 16 * ci) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + col + "\">" + c.name +
         "</text>\n";
    ++ci;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rqt
