#include "instgen/pipeline/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace instgen::pipeline {

StoreReport build_report(const std::vector<tptp::SolutionRecord>& records, const std::string& phase)
{
  StoreReport report;
  int runs = 0;
  std::vector<tptp::SolutionRecord> kept;
  std::map<std::string, ProblemStats> stats;
  for (const auto& r : records) {
    if (!phase.empty() && r.phase != phase) { continue; }
    kept.push_back(r);
    if (r.run) { runs = std::max(runs, *r.run + 1); }
    ++report.status_counts[std::string(tptp::to_string(r.status))];
    auto& s = stats[r.problem];
    s.problem = r.problem;
    ++s.attempts;
    s.mean_wall_time_s += r.wall_time_s;
    if (r.status != tptp::SolverStatus::unsat) { continue; }
    ++s.solved;
    if (r.run && (!s.first_solved_run || *r.run < *s.first_solved_run)) { s.first_solved_run = r.run; }
    if (!s.fewest_instances || r.instances.size() < *s.fewest_instances) { s.fewest_instances = r.instances.size(); }
  }
  report.curve = cumulative_curve(kept, runs);
  for (auto& [name, s] : stats) {
    s.mean_wall_time_s /= static_cast<double>(s.attempts);
    report.problems.push_back(s);
  }
  return report;
}

nlohmann::ordered_json StoreReport::to_json() const
{
  nlohmann::ordered_json per_problem = nlohmann::ordered_json::array();
  for (const auto& p : problems) {
    per_problem.push_back({ { "problem", p.problem },
                            { "attempts", p.attempts },
                            { "solved", p.solved },
                            { "first_solved_run", p.first_solved_run ? nlohmann::ordered_json(*p.first_solved_run) : nullptr },
                            { "fewest_instances",
                              p.fewest_instances ? nlohmann::ordered_json(*p.fewest_instances) : nullptr },
                            { "mean_wall_time_s", p.mean_wall_time_s } });
  }
  return { { "runs", curve.solved.size() },
           { "solved_per_run", curve.solved },
           { "cumulative", curve.cumulative },
           { "status_counts", status_counts },
           { "problems", std::move(per_problem) } };
}

std::string StoreReport::cumulative_csv() const
{
  std::ostringstream out;
  out << "run,solved,cumulative\n";
  for (std::size_t r = 0; r < curve.solved.size(); ++r) {
    out << r + 1 << "," << curve.solved[r] << "," << curve.cumulative[r] << "\n";
  }
  return out.str();
}

std::string StoreReport::problems_csv() const
{
  std::ostringstream out;
  out << "problem,attempts,solved,first_solved_run,fewest_instances,mean_wall_time_s\n";
  for (const auto& p : problems) {
    out << p.problem << "," << p.attempts << "," << p.solved << ",";
    if (p.first_solved_run) { out << *p.first_solved_run + 1; }
    out << ",";
    if (p.fewest_instances) { out << *p.fewest_instances; }
    out << "," << p.mean_wall_time_s << "\n";
  }
  return out.str();
}

std::string StoreReport::cumulative_svg() const
{
  const double w = 640;
  const double h = 400;
  const double left = 60;
  const double right = 20;
  const double top = 20;
  const double bottom = 50;
  const auto n = curve.cumulative.size();
  const double ymax = std::max<double>(1.0, curve.cumulative.empty() ? 1.0 : static_cast<double>(curve.cumulative.back()));
  auto x = [&](std::size_t i) {
    return n <= 1 ? left : left + (w - left - right) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto y = [&](double v) { return h - bottom - (h - top - bottom) * v / ymax; };

  std::ostringstream svg;
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << w << R"(" height=")" << h << R"(">)" << "\n";
  svg << R"(<rect width="100%" height="100%" fill="white"/>)" << "\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\" font-size=\"14\">run</text>\n";
  svg << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15," << h / 2
      << ")\" text-anchor=\"middle\" font-size=\"14\">cumulative solved</text>\n";
  svg << "<text x=\"" << left - 5 << "\" y=\"" << y(ymax) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << ymax
      << "</text>\n";
  svg << "<text x=\"" << left - 5 << "\" y=\"" << y(0) + 4 << "\" text-anchor=\"end\" font-size=\"11\">0</text>\n";
  if (n > 0) {
    svg << "<text x=\"" << x(0) << "\" y=\"" << h - bottom + 15 << "\" text-anchor=\"middle\" font-size=\"11\">1</text>\n";
    svg << "<text x=\"" << x(n - 1) << "\" y=\"" << h - bottom + 15 << "\" text-anchor=\"middle\" font-size=\"11\">" << n
        << "</text>\n";
    svg << R"(<polyline fill="none" stroke="steelblue" stroke-width="2" points=")";
    for (std::size_t i = 0; i < n; ++i) {
      svg << (i ? " " : "") << x(i) << "," << y(static_cast<double>(curve.cumulative[i]));
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> write_report_files(const StoreReport& report, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> files{ { "cumulative.csv", report.cumulative_csv() },
                                                                { "problems.csv", report.problems_csv() },
                                                                { "cumulative.svg", report.cumulative_svg() } };
  std::vector<std::filesystem::path> out;
  for (const auto& [name, body] : files) {
    const auto path = dir / name;
    std::ofstream f(path, std::ios::trunc);
    f << body;
    if (!f) { throw std::runtime_error("cannot write " + path.string()); }
    out.push_back(path);
  }
  return out;
}

}  // namespace instgen::pipeline
