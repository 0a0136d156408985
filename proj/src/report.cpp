#include "albench/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "albench/config.hpp"
#include "albench/io.hpp"

namespace albench {

std::string results_csv(const ExperimentResult& result, const ExperimentConfig& config) {
  std::ostringstream out;
  out << "run_seed,round,total_labels,test_accuracy,scorer,mode,classifier\n";
  const std::string scorer = scorer_name(config.scorer);
  const std::string mode = mode_name(config.mode);
  const std::string classifier = classifier_list_name(config.classifiers);
  for (const auto& run : result.runs) {
    for (const auto& round : run.rounds) {
      out << run.seed << "," << round.round << "," << round.total_annotations << ","
          << format_double(round.test_accuracy) << "," << scorer << "," << mode << ","
          << classifier << "\n";
    }
  }
  return out.str();
}

std::string results_json(const ExperimentResult& result, const std::string& canonical_config) {
  nlohmann::json j;
  j["config"] = canonical_config;
  j["aggregate"] = {{"total_labels", result.total_labels},
                    {"mean_accuracy", result.mean_accuracy},
                    {"std_accuracy", result.std_accuracy}};
  j["runs"] = nlohmann::json::array();
  for (const auto& run : result.runs) {
    nlohmann::json jr;
    jr["seed"] = run.seed;
    jr["rounds"] = nlohmann::json::array();
    for (const auto& round : run.rounds) {
      jr["rounds"].push_back({{"round", round.round},
                              {"total_labels", round.total_annotations},
                              {"test_accuracy", round.test_accuracy},
                              {"batch_from_labeled", round.batch_from_labeled},
                              {"batch_from_pool", round.batch_from_pool},
                              {"batch", round.batch},
                              {"consensus_changes", round.consensus_changes},
                              {"trust",
                               {{"typical_accuracy", round.trust.typical_accuracy},
                                {"avg_annotator_weight", round.trust.avg_annotator_weight},
                                {"mlc_accuracy", round.trust.mlc_accuracy},
                                {"model_weights", round.trust.model_weights},
                                {"low_confidence", round.trust.low_confidence}}}});
    }
    j["runs"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

std::string manifest_json(const std::string& config_hash, const std::string& timestamp,
                          const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["artifact"] = "albench";
  j["version"] = "0.1.0";
  j["config_hash"] = config_hash;
  j["created"] = timestamp;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

std::vector<CurveSeries> curves_from_results_csv(const std::vector<std::string>& csv_texts) {
  if (csv_texts.empty()) throw std::invalid_argument("no results files given");
  struct Cell {
    std::vector<double> accuracies;
    long total_labels = 0;
  };
  // label -> round -> accuracies across seeds
  std::map<std::string, std::map<int, Cell>> grouped;

  for (const auto& text : csv_texts) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw std::invalid_argument("empty results file");
    if (line.rfind("run_seed,round,total_labels,test_accuracy", 0) != 0)
      throw std::invalid_argument("not a results CSV: unexpected header '" + line + "'");
    while (std::getline(ss, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::string field;
      std::stringstream ls(line);
      while (std::getline(ls, field, ',')) f.push_back(field);
      if (f.size() != 7) throw std::invalid_argument("bad results row: '" + line + "'");
      int round = std::stoi(f[1]);
      long labels = std::stol(f[2]);
      double acc = std::stod(f[3]);
      std::string label = f[4] + " (" + f[6] + ", " + f[5] + ")";
      Cell& cell = grouped[label][round];
      cell.accuracies.push_back(acc);
      cell.total_labels = labels;
    }
  }

  std::vector<CurveSeries> series;
  for (auto& [label, rounds] : grouped) {
    CurveSeries s;
    s.label = label;
    for (auto& [round, cell] : rounds) {
      double mean = 0.0;
      for (double a : cell.accuracies) mean += a;
      mean /= cell.accuracies.size();
      double var = 0.0;
      for (double a : cell.accuracies) var += (a - mean) * (a - mean);
      var /= cell.accuracies.size();
      s.total_labels.push_back(cell.total_labels);
      s.mean.push_back(mean);
      s.stddev.push_back(std::sqrt(var));
    }
    series.push_back(std::move(s));
  }
  return series;
}

namespace {

const char* kPalette[] = {"#3366cc", "#dc3912", "#ff9900", "#109618", "#990099",
                          "#0099c6", "#dd4477", "#66aa00", "#b82e2e"};

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_chart_svg(const std::vector<CurveSeries>& series) {
  if (series.empty()) throw std::invalid_argument("nothing to chart");
  const double width = 720, height = 480;
  const double left = 70, right = 180, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  long x_min = series[0].total_labels.front(), x_max = x_min;
  double y_min = 1.0, y_max = 0.0;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.total_labels.size(); ++i) {
      x_min = std::min(x_min, s.total_labels[i]);
      x_max = std::max(x_max, s.total_labels[i]);
      y_min = std::min(y_min, s.mean[i] - s.stddev[i]);
      y_max = std::max(y_max, s.mean[i] + s.stddev[i]);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  double pad = std::max(0.01, (y_max - y_min) * 0.08);
  y_min = std::max(0.0, y_min - pad);
  y_max = std::min(1.0, y_max + pad);
  if (y_max <= y_min) y_max = y_min + 0.01;

  auto sx = [&](double x) { return left + (x - x_min) / double(x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes and ticks
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    double xv = x_min + (x_max - x_min) * t / 5.0;
    double yv = y_min + (y_max - y_min) * t / 5.0;
    svg << "<line x1=\"" << svg_num(sx(xv)) << "\" y1=\"" << top + plot_h << "\" x2=\""
        << svg_num(sx(xv)) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << svg_num(sx(xv)) << "\" y=\"" << top + plot_h + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">" << static_cast<long>(xv + 0.5)
        << "</text>\n";
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << svg_num(sy(yv)) << "\" x2=\"" << left
        << "\" y2=\"" << svg_num(sy(yv)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 9 << "\" y=\"" << svg_num(sy(yv) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << svg_num(yv) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">total labels</text>\n";
  svg << "<text x=\"18\" y=\"" << top + plot_h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">test accuracy</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    // band
    std::ostringstream band;
    for (size_t i = 0; i < s.total_labels.size(); ++i)
      band << svg_num(sx(s.total_labels[i])) << "," << svg_num(sy(s.mean[i] + s.stddev[i])) << " ";
    for (size_t i = s.total_labels.size(); i-- > 0;)
      band << svg_num(sx(s.total_labels[i])) << "," << svg_num(sy(s.mean[i] - s.stddev[i])) << " ";
    svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
        << "\" opacity=\"0.15\" stroke=\"none\"/>\n";
    // mean line
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < s.total_labels.size(); ++i)
      svg << svg_num(sx(s.total_labels[i])) << "," << svg_num(sy(s.mean[i])) << " ";
    svg << "\"/>\n";
    // legend
    double ly = top + 14 + 18 * static_cast<double>(si);
    svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << svg_num(ly) << "\" x2=\""
        << left + plot_w + 34 << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 40 << "\" y=\"" << svg_num(ly + 4)
        << "\" font-size=\"11\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string summary_table(const std::vector<CurveSeries>& series) {
  std::ostringstream out;
  out << "series,final_total_labels,final_mean_accuracy,final_std_accuracy\n";
  for (const auto& s : series) {
    out << s.label << "," << s.total_labels.back() << "," << format_double(s.mean.back()) << ","
        << format_double(s.stddev.back()) << "\n";
  }
  return out.str();
}

}  // namespace albench
