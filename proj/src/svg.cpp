#include "jsat/svg.hpp"

#include <cmath>
#include <fstream>

#include "jsat/error.hpp"
#include "jsat/io.hpp"

namespace jsat::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                          "#17becf", "#7f7f7f"};

constexpr double kPanelW = 300.0;
constexpr double kPanelH = 240.0;
constexpr double kMarginL = 52.0;
constexpr double kMarginB = 40.0;
constexpr double kMarginT = 48.0;
constexpr double kGap = 28.0;
constexpr double kLegendW = 110.0;

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<Panel>& panels, const std::string& y_label) {
  if (panels.empty()) fail(errc::invalid_argument, "no panels to plot");
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write " + path);

  const double width =
      kMarginL + panels.size() * (kPanelW + kGap) + kLegendW;
  const double height = kMarginT + kPanelH + kMarginB;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    const double x0 = kMarginL + p * (kPanelW + kGap);
    const double y0 = kMarginT;
    const double y1 = y0 + kPanelH;

    out << "<text x=\"" << x0 + kPanelW / 2 << "\" y=\"" << y0 - 8
        << "\" text-anchor=\"middle\">" << panel.subtitle << "</text>\n";
    out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << kPanelW << "\" height=\""
        << kPanelH << "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (int tick = 0; tick <= 5; ++tick) {
      const double v = tick / 5.0;
      const double y = y1 - v * kPanelH;
      out << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x0 + kPanelW << "\" y2=\""
          << y << "\" stroke=\"#ddd\"/>\n";
      if (p == 0)
        out << "<text x=\"" << x0 - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
            << io::format_double(v) << "</text>\n";
    }
    if (p == 0)
      out << "<text x=\"14\" y=\"" << (y0 + y1) / 2 << "\" transform=\"rotate(-90 14 "
          << (y0 + y1) / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

    const std::size_t nx = panel.x_labels.size();
    const auto x_of = [&](std::size_t i) {
      return nx <= 1 ? x0 + kPanelW / 2
                     : x0 + kPanelW * (0.08 + 0.84 * static_cast<double>(i) /
                                                  static_cast<double>(nx - 1));
    };
    for (std::size_t i = 0; i < nx; ++i)
      out << "<text x=\"" << x_of(i) << "\" y=\"" << y1 + 16 << "\" text-anchor=\"middle\">"
          << panel.x_labels[i] << "</text>\n";

    for (std::size_t s = 0; s < panel.series.size(); ++s) {
      const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
      for (std::size_t i = 0; i < panel.series[s].values.size() && i < nx; ++i) {
        const double v = panel.series[s].values[i];
        if (std::isnan(v)) continue;
        out << x_of(i) << ',' << y1 - v * kPanelH << ' ';
      }
      out << "\"/>\n";
      for (std::size_t i = 0; i < panel.series[s].values.size() && i < nx; ++i) {
        const double v = panel.series[s].values[i];
        if (std::isnan(v)) continue;
        out << "<circle cx=\"" << x_of(i) << "\" cy=\"" << y1 - v * kPanelH
            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
      }
    }
  }

  // legend from the first panel's series order
  const double lx = kMarginL + panels.size() * (kPanelW + kGap) + 8.0;
  for (std::size_t s = 0; s < panels[0].series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double y = kMarginT + 14.0 + 18.0 * s;
    out << "<line x1=\"" << lx << "\" y1=\"" << y << "\" x2=\"" << lx + 22 << "\" y2=\"" << y
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << lx + 28 << "\" y=\"" << y + 4 << "\">" << panels[0].series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace jsat::svg
