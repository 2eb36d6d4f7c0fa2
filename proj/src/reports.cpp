// Copyright 2026 The vqopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "vqopt/bench.hpp"
#include "vqopt/errors.hpp"

namespace vqopt {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string series_label(const RunSummary& s) {
  std::string label = to_string(s.config.problem.kind) + " p=" + std::to_string(s.config.problem.p) + " " +
                      to_string(s.config.optimizer) + " " + to_string(s.config.scenario);
  if (s.config.rotation_error > 0.0) label += " eps=" + fmt(s.config.rotation_error);
  return label;
}

// Minimal SVG plot: a frame with linear axes and labelled ticks.
class Plot {
 public:
  Plot(std::string title, std::string xlabel, std::string ylabel, double x0, double x1, double y0, double y1)
      : x0_(x0), x1_(x1 > x0 ? x1 : x0 + 1.0), y0_(y0), y1_(y1 > y0 ? y1 : y0 + 1.0) {
    body_ << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
          << escape(title) << "</text>\n";
    body_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
          << "\" fill=\"none\" stroke=\"black\"/>\n";
    body_ << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 8
          << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xlabel) << "</text>\n";
    body_ << "<text x=\"14\" y=\"" << kTop + kPlotH / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
          << "transform=\"rotate(-90 14 " << kTop + kPlotH / 2 << ")\">" << escape(ylabel) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / 4.0;
      const double yv = y0_ + (y1_ - y0_) * i / 4.0;
      body_ << "<text x=\"" << px(xv) << "\" y=\"" << kTop + kPlotH + 16
            << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xv) << "</text>\n";
      body_ << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 3
            << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(yv) << "</text>\n";
    }
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * kPlotW; }
  double py(double y) const { return kTop + kPlotH - (y - y0_) / (y1_ - y0_) * kPlotH; }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    if (pts.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [x, y] : pts) body_ << fmt(px(x)) << "," << fmt(py(y)) << " ";
    body_ << "\"/>\n";
    for (const auto& [x, y] : pts) {
      body_ << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"2\" fill=\"" << color
            << "\"/>\n";
    }
  }

  void bar(double x, double width, double y, std::optional<double> err, const std::string& color) {
    const double top = py(y), base = py(y0_);
    body_ << "<rect x=\"" << fmt(px(x)) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(px(x + width) - px(x))
          << "\" height=\"" << fmt(base - top) << "\" fill=\"" << color << "\"/>\n";
    if (err) {
      const double cx = px(x + width / 2);
      body_ << "<line x1=\"" << fmt(cx) << "\" x2=\"" << fmt(cx) << "\" y1=\"" << fmt(py(y - *err))
            << "\" y2=\"" << fmt(py(y + *err)) << "\" stroke=\"black\"/>\n";
    }
  }

  void label(double x, double y, const std::string& text) {
    body_ << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(py(y)) << "\" font-size=\"9\">" << escape(text)
          << "</text>\n";
  }

  void legend(const std::string& text, const std::string& color) {
    const int y = kTop + 12 * static_cast<int>(legend_rows_++);
    body_ << "<rect x=\"" << kLeft + kPlotW + 10 << "\" y=\"" << y << "\" width=\"10\" height=\"8\" fill=\""
          << color << "\"/>\n";
    body_ << "<text x=\"" << kLeft + kPlotW + 24 << "\" y=\"" << y + 8 << "\" font-size=\"10\">"
          << escape(text) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\">\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  static std::string escape(const std::string& s) {
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

 private:
  static constexpr int kWidth = 900, kHeight = 420, kLeft = 60, kTop = 30, kPlotW = 560, kPlotH = 340;
  double x0_, x1_, y0_, y1_;
  std::size_t legend_rows_ = 0;
  std::ostringstream body_;
};

const std::string& color(std::size_t i) {
  static const std::vector<std::string> palette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[i % palette.size()];
}

// Mean time to solution at the first precision, one bar per
// (problem, optimizer) group and scenario.
std::string time_to_solution_chart(const std::vector<RunSummary>& summaries) {
  std::vector<std::string> groups, scenarios;
  for (const auto& s : summaries) {
    const std::string g = to_string(s.config.problem.kind) + " p=" + std::to_string(s.config.problem.p) + " " +
                          to_string(s.config.optimizer);
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    const std::string sc = to_string(s.config.scenario);
    if (std::find(scenarios.begin(), scenarios.end(), sc) == scenarios.end()) scenarios.push_back(sc);
  }
  double ymax = 0.0;
  for (const auto& s : summaries) {
    if (!s.stats.empty() && s.stats[0].mean_time) {
      ymax = std::max(ymax, *s.stats[0].mean_time + s.stats[0].time_std.value_or(0.0));
    }
  }
  Plot plot("Time to solution", "optimizer", "seconds", 0.0, static_cast<double>(groups.size()), 0.0,
            ymax > 0 ? ymax * 1.1 : 1.0);
  const double width = 0.8 / static_cast<double>(std::max<std::size_t>(scenarios.size(), 1));
  for (const auto& s : summaries) {
    if (s.stats.empty() || !s.stats[0].mean_time) continue;
    const std::string g = to_string(s.config.problem.kind) + " p=" + std::to_string(s.config.problem.p) + " " +
                          to_string(s.config.optimizer);
    const auto gi = std::find(groups.begin(), groups.end(), g) - groups.begin();
    const auto si = std::find(scenarios.begin(), scenarios.end(), to_string(s.config.scenario)) - scenarios.begin();
    plot.bar(static_cast<double>(gi) + 0.1 + width * static_cast<double>(si), width, *s.stats[0].mean_time,
             s.stats[0].time_std, color(static_cast<std::size_t>(si)));
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) plot.label(static_cast<double>(gi) + 0.1, 0.0, groups[gi]);
  for (std::size_t si = 0; si < scenarios.size(); ++si) plot.legend(scenarios[si], color(si));
  return plot.str();
}

// Success probability or mean time against -log10(precision).
std::string precision_chart(const std::vector<RunSummary>& summaries, bool times) {
  double xmin = 1e300, xmax = -1e300, ymax = 1.0;
  for (const auto& s : summaries) {
    for (const auto& st : s.stats) {
      xmin = std::min(xmin, -std::log10(st.precision));
      xmax = std::max(xmax, -std::log10(st.precision));
      if (times && st.mean_time) ymax = std::max(ymax, *st.mean_time * 1.1);
    }
  }
  if (xmin > xmax) xmin = xmax = 0.0;
  Plot plot(times ? "Time to solution vs precision" : "Success probability vs precision", "-log10(precision)",
            times ? "seconds" : "success probability", xmin, xmax, 0.0, ymax);
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& st : summaries[i].stats) {
      if (times && !st.mean_time) continue;
      pts.emplace_back(-std::log10(st.precision), times ? *st.mean_time : st.success_prob);
    }
    plot.polyline(pts, color(i));
    plot.legend(series_label(summaries[i]), color(i));
  }
  return plot.str();
}

// Success probability against rotation error, one curve per setting.
std::string error_chart(const std::vector<RunSummary>& summaries) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::vector<std::pair<double, double>>> curves;
  std::vector<Key> order;
  double xmax = 0.0;
  for (const auto& s : summaries) {
    const Key key{to_string(s.config.problem.kind) + " p=" + std::to_string(s.config.problem.p),
                  to_string(s.config.optimizer), to_string(s.config.scenario)};
    if (!curves.count(key)) order.push_back(key);
    const double p = s.stats.empty() ? 0.0 : s.stats.back().success_prob;
    curves[key].emplace_back(s.config.rotation_error, p);
    xmax = std::max(xmax, s.config.rotation_error);
  }
  Plot plot("Success probability vs rotation error", "rotation error", "success probability", 0.0,
            xmax > 0 ? xmax : 1.0, 0.0, 1.0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto pts = curves[order[i]];
    std::sort(pts.begin(), pts.end());
    plot.polyline(pts, color(i));
    const auto& [problem, optimizer, scenario] = order[i];
    plot.legend(problem + " " + optimizer + " " + scenario, color(i));
  }
  return plot.str();
}

// Score gap to the optimum against time for the first seeds of each summary.
std::string trajectory_chart(const std::vector<RunSummary>& summaries) {
  constexpr std::size_t kSeedsShown = 5;
  double tmax = 0.0, gmin = 0.0, gmax = -1e300;
  auto gap = [](double score, double opt) { return std::log10(std::max(std::abs(score - opt), 1e-12)); };
  for (const auto& s : summaries) {
    for (std::size_t r = 0; r < std::min(kSeedsShown, s.runs.size()); ++r) {
      for (const auto& e : s.runs[r].trace.entries) {
        tmax = std::max(tmax, e.time);
        const double g = gap(e.exact_score, s.optimum_score);
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
      }
    }
  }
  if (gmax < gmin) gmax = gmin + 1.0;
  Plot plot("Score gap vs time", "seconds", "log10 |score - optimum|", 0.0, tmax, std::floor(gmin),
            std::ceil(gmax));
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& s = summaries[i];
    for (std::size_t r = 0; r < std::min(kSeedsShown, s.runs.size()); ++r) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& e : s.runs[r].trace.entries) pts.emplace_back(e.time, gap(e.exact_score, s.optimum_score));
      plot.polyline(pts, color(i));
    }
    plot.legend(series_label(s), color(i));
  }
  return plot.str();
}

}  // namespace

const std::vector<std::string>& chart_files() {
  static const std::vector<std::string> files = {"time_to_solution.svg", "success_vs_precision.svg",
                                                  "time_vs_precision.svg", "success_vs_error.svg",
                                                  "trajectories.svg"};
  return files;
}

void write_traces_jsonl(const std::vector<RunSummary>& summaries, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& s : summaries) {
    json run = {{"type", "run"}, {"config", json::parse(run_config_to_json(s.config))},
                {"optimum_score", s.optimum_score}};
    out << run.dump() << "\n";
    for (const auto& r : s.runs) {
      for (const auto& e : r.trace.entries) {
        json rec = {{"type", "candidate"},
                    {"seed", r.seed},
                    {"wall_time_s", e.time},
                    {"params", e.candidate},
                    {"exact_score", e.exact_score},
                    {"cumulative_shots", e.cumulative.shots},
                    {"cumulative_circuits", e.cumulative.circuits},
                    {"cumulative_batches", e.cumulative.batches}};
        out << rec.dump() << "\n";
      }
      json end = {{"type", "seed_end"},
                  {"seed", r.seed},
                  {"total_time_s", r.trace.total_time},
                  {"total_shots", r.trace.totals.shots},
                  {"total_circuits", r.trace.totals.circuits},
                  {"total_batches", r.trace.totals.batches},
                  {"stop_reason", r.trace.stop_reason}};
      out << end.dump() << "\n";
    }
  }
  write_file(path, out.str());
}

std::vector<RunSummary> read_traces_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<RunSummary> out;
  std::map<std::uint64_t, std::size_t> seed_index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      const std::string type = rec.at("type").get<std::string>();
      if (type == "run") {
        RunSummary s;
        s.config = parse_run_config(rec.at("config").dump());
        s.optimum_score = rec.at("optimum_score").get<double>();
        seed_index.clear();
        for (std::size_t i = 0; i < s.config.seeds.size(); ++i) {
          s.runs.push_back({s.config.seeds[i], {}});
          seed_index[s.config.seeds[i]] = i;
        }
        out.push_back(std::move(s));
        continue;
      }
      if (out.empty()) throw std::invalid_argument("record before any run record");
      auto& run = out.back().runs.at(seed_index.at(rec.at("seed").get<std::uint64_t>()));
      if (type == "candidate") {
        TraceEntry e;
        e.time = rec.at("wall_time_s").get<double>();
        e.candidate = rec.at("params").get<std::vector<double>>();
        e.exact_score = rec.at("exact_score").get<double>();
        e.cumulative.shots = rec.at("cumulative_shots").get<std::uint64_t>();
        e.cumulative.circuits = rec.at("cumulative_circuits").get<std::uint64_t>();
        e.cumulative.batches = rec.value("cumulative_batches", std::uint64_t{0});
        e.evals = e.cumulative.circuits;
        run.trace.entries.push_back(std::move(e));
      } else if (type == "seed_end") {
        run.trace.total_time = rec.at("total_time_s").get<double>();
        run.trace.totals = {rec.at("total_shots").get<std::uint64_t>(), rec.at("total_circuits").get<std::uint64_t>(),
                            rec.at("total_batches").get<std::uint64_t>()};
        run.trace.stop_reason = rec.at("stop_reason").get<std::string>();
      } else {
        throw std::invalid_argument("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": unknown seed");
    }
  }
  for (auto& s : out) s.stats = summarize(s.config, s.optimum_score, s.runs);
  return out;
}

std::string summary_csv(const std::vector<RunSummary>& summaries) {
  std::ostringstream out;
  out << "problem,p,optimizer,scenario,epsilon,precision,seeds,successes,success_prob,success_std,"
         "mean_time_s,time_std_s\n";
  for (const auto& s : summaries) {
    for (const auto& st : s.stats) {
      out << to_string(s.config.problem.kind) << "," << s.config.problem.p << "," << to_string(s.config.optimizer)
          << "," << to_string(s.config.scenario) << "," << fmt(s.config.rotation_error) << ","
          << fmt(st.precision) << "," << s.runs.size() << "," << st.successes << "," << fmt(st.success_prob)
          << "," << fmt(st.success_std) << "," << (st.mean_time ? fmt(*st.mean_time) : "") << ","
          << (st.time_std ? fmt(*st.time_std) : "") << "\n";
    }
  }
  return out.str();
}

void emit_summary_files(const std::vector<RunSummary>& summaries, const std::filesystem::path& dir) {
  if (summaries.empty()) throw std::invalid_argument("emit_reports: no summaries");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  write_file(dir / "summary.csv", summary_csv(summaries));
  const auto& files = chart_files();
  write_file(dir / files[0], time_to_solution_chart(summaries));
  write_file(dir / files[1], precision_chart(summaries, false));
  write_file(dir / files[2], precision_chart(summaries, true));
  write_file(dir / files[3], error_chart(summaries));
  write_file(dir / files[4], trajectory_chart(summaries));
}

void emit_reports(const std::vector<RunSummary>& summaries, const std::filesystem::path& dir) {
  emit_summary_files(summaries, dir);
  write_traces_jsonl(summaries, dir / "traces.jsonl");
}

}  // namespace vqopt
