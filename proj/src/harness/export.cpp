#include "memscope/harness/export.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "memscope/error.hpp"

namespace memscope::harness {

namespace {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error("failed to format number");
  return std::string(buf.data(), ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(std::string("results csv: bad ") + what + " '" + s + "'");
  }
  return v;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const RunRecord> records) {
  std::vector<const RunRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const RunRecord* a, const RunRecord* b) {
    return std::tie(a->config_id, a->run) < std::tie(b->config_id, b->run);
  });

  out << kResultsCsvHeader << '\n';
  for (const auto* rec : sorted) {
    std::vector<EvalPoint> evals = rec->evals;
    std::stable_sort(evals.begin(), evals.end(), [](const EvalPoint& a, const EvalPoint& b) {
      return std::tie(a.eval_episode, a.seed) < std::tie(b.eval_episode, b.seed);
    });
    const auto& s = rec->stamp;
    for (const auto& e : evals) {
      out << rec->config_id << ',' << rec->run << ',' << e.eval_episode << ',' << e.seed << ','
          << (e.success ? 1 : 0) << ',' << format_double(e.ret) << ',' << s.k << ',' << s.k_eff
          << ',' << s.xi_min << ',' << s.xi_max << ',' << s.k_bar << ','
          << core::to_string(s.task_class) << '\n';
    }
  }
}

void write_results_csv(const std::filesystem::path& path, std::span<const RunRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_results_csv(out, records);
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<RunRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsCsvHeader) {
    throw ConfigError("results csv: missing or unexpected header");
  }
  std::map<std::pair<std::string, int>, RunRecord> by_run;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw ConfigError("results csv: expected 12 fields in '" + line + "'");
    const int run = parse_number<int>(f[1], "run");
    auto& rec = by_run[{f[0], run}];
    rec.config_id = f[0];
    rec.run = run;
    const auto cls = core::parse_memory_task_class(f[11]);
    if (!cls) throw ConfigError("results csv: bad class '" + f[11] + "'");
    rec.stamp.task_class = *cls;
    rec.stamp.k = parse_number<std::int64_t>(f[6], "K");
    rec.stamp.k_eff = parse_number<std::int64_t>(f[7], "K_eff");
    rec.stamp.xi_min = parse_number<std::int64_t>(f[8], "xi_min");
    rec.stamp.xi_max = parse_number<std::int64_t>(f[9], "xi_max");
    rec.stamp.k_bar = parse_number<std::int64_t>(f[10], "K_bar");
    rec.evals.push_back({parse_number<std::int64_t>(f[2], "eval_episode"),
                         parse_number<std::uint64_t>(f[3], "seed"), f[4] == "1",
                         parse_number<double>(f[5], "return")});
  }
  std::vector<RunRecord> out;
  for (auto& [key, rec] : by_run) out.push_back(std::move(rec));
  return out;
}

std::vector<RunRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_results_csv(in);
}

Curve make_curve(const std::string& label, std::span<const MetricSummary> summary,
                 PlotMetric metric) {
  Curve c{label, {}};
  for (const auto& s : summary) {
    const auto& stats = metric == PlotMetric::SuccessRate ? s.success_rate : s.ret;
    c.points.push_back({static_cast<double>(s.eval_episode), stats.mean, stats.sem});
  }
  return c;
}

namespace {

constexpr std::array<const char*, 6> kPalette{"#1b9e77", "#d95f02", "#7570b3",
                                              "#e7298a", "#66a61e", "#e6ab02"};

struct Frame {
  double left, top, width, height;
  double x_max, y_min, y_max;

  double px(double x) const { return left + (x_max > 0 ? x / x_max : 0.0) * width; }
  double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

void draw_axes(std::ostream& out, const Frame& f, const std::string& title,
               const std::string& y_label) {
  out << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\"" << f.width
      << "\" height=\"" << f.height << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = f.y_min + (f.y_max - f.y_min) * i / 4.0;
    out << "<line x1=\"" << f.left << "\" x2=\"" << f.left + f.width << "\" y1=\"" << f.py(y)
        << "\" y2=\"" << f.py(y) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << f.left - 6 << "\" y=\"" << f.py(y) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(std::round(y * 100) / 100)
        << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x_max * i / 4.0;
    out << "<text x=\"" << f.px(x) << "\" y=\"" << f.top + f.height + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << static_cast<long long>(std::llround(x))
        << "</text>\n";
  }
  out << "<text x=\"" << f.left + f.width / 2 << "\" y=\"" << f.top + f.height + 34
      << "\" font-size=\"12\" text-anchor=\"middle\">training episodes</text>\n";
  out << "<text x=\"" << f.left - 40 << "\" y=\"" << f.top + f.height / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " << f.left - 40 << ' '
      << f.top + f.height / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  if (!title.empty()) {
    out << "<text x=\"" << f.left + f.width / 2 << "\" y=\"" << f.top - 8
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";
  }
}

void draw_curve(std::ostream& out, const Frame& f, const Curve& c, const char* color) {
  if (c.points.empty()) return;
  out << "<g class=\"curve\" data-label=\"" << xml_escape(c.label) << "\">\n";
  out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
  for (const auto& p : c.points) out << f.px(p.x) << ',' << f.py(p.mean + p.sem) << ' ';
  for (auto it = c.points.rbegin(); it != c.points.rend(); ++it) {
    out << f.px(it->x) << ',' << f.py(it->mean - it->sem) << ' ';
  }
  out << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
  for (const auto& p : c.points) out << f.px(p.x) << ',' << f.py(p.mean) << ' ';
  out << "\"/>\n</g>\n";
}

}  // namespace

void write_learning_curves_svg(std::ostream& out, std::span<const Curve> curves,
                               PlotLayout layout, PlotMetric metric) {
  double x_max = 1.0, y_min = 0.0, y_max = 1.0;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      x_max = std::max(x_max, p.x);
      y_min = std::min(y_min, p.mean - p.sem);
      y_max = std::max(y_max, p.mean + p.sem);
    }
  }
  const std::string y_label = metric == PlotMetric::SuccessRate ? "success rate" : "return";
  const bool panels = layout == PlotLayout::Panels && !curves.empty();
  const std::size_t n_panels = panels ? curves.size() : 1;
  const double panel_w = panels ? 320.0 : 560.0;
  const double panel_h = panels ? 240.0 : 320.0;
  const double legend_h = panels ? 0.0 : 20.0 * static_cast<double>(curves.size());
  const double width = 80.0 + n_panels * (panel_w + 70.0);
  const double height = 60.0 + panel_h + 50.0 + legend_h;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (panels) {
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const Frame f{70.0 + i * (panel_w + 70.0), 40.0, panel_w, panel_h, x_max, y_min, y_max};
      draw_axes(out, f, curves[i].label, y_label);
      draw_curve(out, f, curves[i], kPalette[i % kPalette.size()]);
    }
  } else {
    const Frame f{70.0, 40.0, panel_w, panel_h, x_max, y_min, y_max};
    draw_axes(out, f, "", y_label);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      draw_curve(out, f, curves[i], kPalette[i % kPalette.size()]);
      const double ly = 40.0 + panel_h + 50.0 + 20.0 * static_cast<double>(i);
      out << "<line x1=\"70\" x2=\"95\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\""
          << kPalette[i % kPalette.size()] << "\" stroke-width=\"3\"/>\n";
      out << "<text class=\"legend\" x=\"102\" y=\"" << ly + 4 << "\" font-size=\"12\">"
          << xml_escape(curves[i].label) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_learning_curves_svg(const std::filesystem::path& path, std::span<const Curve> curves,
                               PlotLayout layout, PlotMetric metric) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_learning_curves_svg(out, curves, layout, metric);
}

void write_summary_csv(std::ostream& out, const std::string& config_id,
                       std::span<const MetricSummary> summary, bool header) {
  if (header) out << "config_id,eval_episode,n_runs,sr_mean,sr_sem,return_mean,return_sem\n";
  for (const auto& s : summary) {
    out << config_id << ',' << s.eval_episode << ',' << s.success_rate.n << ','
        << format_double(s.success_rate.mean) << ',' << format_double(s.success_rate.sem) << ','
        << format_double(s.ret.mean) << ',' << format_double(s.ret.sem) << '\n';
  }
}

std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m,
                    const ExperimentConfig& config, const ClassificationStamp& stamp) {
  nlohmann::json j{{"config_id", m.config_id},
                   {"config_hash", m.config_hash},
                   {"code_version", m.code_version},
                   {"started_at", m.started_at},
                   {"finished_at", m.finished_at},
                   {"run_seeds", m.run_seeds},
                   {"eval_seeds", m.eval_seeds},
                   {"workers", m.workers},
                   {"config", to_json(config)},
                   {"stamp",
                    {{"class", std::string(core::to_string(stamp.task_class))},
                     {"K", stamp.k},
                     {"K_eff", stamp.k_eff},
                     {"xi_min", stamp.xi_min},
                     {"xi_max", stamp.xi_max},
                     {"K_bar", stamp.k_bar},
                     {"overridden", stamp.overridden},
                     {"note", stamp.note}}}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace memscope::harness
