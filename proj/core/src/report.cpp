#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cits/error.hpp"
#include "cits/simulation.hpp"
#include "json.hpp"

namespace cits {

namespace {

using nlohmann::json;

json load_summary(const std::filesystem::path& dir) {
  const auto path = dir / "summary.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing summary: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("corrupt summary " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("run") || !j["run"].is_object()) {
    throw IoError("corrupt summary " + path.string() + ": no run totals");
  }
  return j;
}

// value / base; 1 when both are zero, null when undefined.
json ratio(const json& value, const json& base) {
  if (!value.is_number() || !base.is_number()) return nullptr;
  const double v = value.get<double>();
  const double b = base.get<double>();
  if (b == 0.0) return v == 0.0 ? json(1.0) : json(nullptr);
  return v / b;
}

constexpr const char* kRatioFields[] = {"pdr", "goodput_bps", "delivered", "sent", "latency_p50_ms",
                                        "latency_p95_ms", "latency_p99_ms"};

json group_ratios(const json& group, const json& base) {
  json out = json::object();
  for (const char* f : kRatioFields) {
    out[f] = ratio(group.value(f, json(nullptr)), base.value(f, json(nullptr)));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

// Grouped bar chart: one cluster per summary group, one bar per run.
std::string bar_chart(const std::string& title, const std::string& field, const std::vector<std::string>& runs,
                      const std::vector<json>& summaries) {
  std::vector<std::string> groups;
  for (const auto& [key, _] : summaries.front().items()) {
    if (key != "run") groups.push_back(key);
  }
  double vmax = 0.0;
  for (const auto& s : summaries) {
    for (const auto& g : groups) {
      if (s.contains(g) && s[g].contains(field) && s[g][field].is_number()) {
        vmax = std::max(vmax, s[g][field].get<double>());
      }
    }
  }
  if (vmax <= 0.0) vmax = 1.0;

  const double bar_w = 18.0;
  const double gap = 24.0;
  const double left = 70.0;
  const double top = 40.0;
  const double plot_h = 240.0;
  const double cluster_w = bar_w * static_cast<double>(runs.size()) + gap;
  const double width = left + cluster_w * static_cast<double>(std::max<std::size_t>(groups.size(), 1)) + 160.0;
  const double height = top + plot_h + 110.0;
  static const char* colors[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<text x=\"" << fmt(left) << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\"" << fmt(width - 150.0)
      << "\" y2=\"" << fmt(top + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"4\" y=\"" << fmt(top + 4) << "\">" << fmt(vmax) << "</text>\n";
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const double x0 = left + gap / 2 + cluster_w * static_cast<double>(gi);
    for (std::size_t ri = 0; ri < summaries.size(); ++ri) {
      const auto& s = summaries[ri];
      double v = 0.0;
      if (s.contains(groups[gi]) && s[groups[gi]].contains(field) && s[groups[gi]][field].is_number()) {
        v = s[groups[gi]][field].get<double>();
      }
      const double h = plot_h * v / vmax;
      svg << "<rect x=\"" << fmt(x0 + bar_w * static_cast<double>(ri)) << "\" y=\"" << fmt(top + plot_h - h)
          << "\" width=\"" << fmt(bar_w - 2) << "\" height=\"" << fmt(h) << "\" fill=\"" << colors[ri % 6]
          << "\"/>\n";
    }
    svg << "<text transform=\"translate(" << fmt(x0) << "," << fmt(top + plot_h + 12)
        << ") rotate(45)\">" << groups[gi] << "</text>\n";
  }
  for (std::size_t ri = 0; ri < runs.size(); ++ri) {
    const double y = top + 14.0 * static_cast<double>(ri);
    svg << "<rect x=\"" << fmt(width - 140.0) << "\" y=\"" << fmt(y) << "\" width=\"10\" height=\"10\" fill=\""
        << colors[ri % 6] << "\"/><text x=\"" << fmt(width - 125.0) << "\" y=\"" << fmt(y + 9) << "\">"
        << runs[ri] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void report(const std::vector<std::filesystem::path>& run_dirs, const std::filesystem::path& report_file,
            bool svg) {
  if (run_dirs.empty()) throw Error("report needs at least one run directory");
  std::vector<json> summaries;
  std::vector<std::string> labels;
  for (const auto& d : run_dirs) {
    summaries.push_back(load_summary(d));
    labels.push_back(d.filename().empty() ? d.parent_path().filename().string() : d.filename().string());
  }

  const json& base = summaries.front();
  json runs = json::array();
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& s = summaries[i];
    json ratios = json::object();
    for (const auto& [key, group] : s.items()) {
      const json empty = json::object();
      ratios[key] = group_ratios(group, base.contains(key) ? base[key] : empty);
    }
    runs.push_back({{"dir", run_dirs[i].generic_string()}, {"summary", s}, {"ratios", ratios}});
  }
  json doc = {{"baseline", run_dirs.front().generic_string()}, {"runs", runs}};

  if (!report_file.parent_path().empty()) std::filesystem::create_directories(report_file.parent_path());
  write_file(report_file, doc.dump(2) + "\n");
  if (svg) {
    const auto dir = report_file.parent_path();
    write_file(dir / "pdr.svg", bar_chart("PDR per layer:rat", "pdr", labels, summaries));
    write_file(dir / "goodput.svg", bar_chart("Goodput (bps) per layer:rat", "goodput_bps", labels, summaries));
  }
}

}  // namespace cits
