#ifndef JSAT_SVG_HPP
#define JSAT_SVG_HPP

#include <string>
#include <vector>

namespace jsat::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // one per x category, NaN = missing point
};

struct Panel {
  std::string subtitle;
  std::vector<std::string> x_labels;
  std::vector<Series> series;
};

// Static multi-panel line chart with a shared [0,1] y-axis and a legend.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<Panel>& panels, const std::string& y_label = "power");

}  // namespace jsat::svg

#endif
