/*
 * Copyright 2026 The CIET Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ciet/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <vector>

namespace ciet {
namespace {

std::string Format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string Percent(double v) { return Format("%.2f%%", 100.0 * v); }

std::string ConditionText(const Condition& c) {
  return c.feature + " " + std::string(DirectionSymbol(c.direction)) + " " +
         Format("%.2f", c.threshold);
}

std::string RenderGrid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      width[k] = std::max(width[k], row[k].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t k = 0; k < row.size(); ++k) {
      line += row[k];
      if (k + 1 < row.size()) line += std::string(width[k] - row[k].size() + 2, ' ');
    }
    out << line << "\n";
  }
  return out.str();
}

void RenderNode(const BaselineTree& tree, std::size_t i, int depth,
                std::ostringstream& out) {
  const BaselineNode& n = tree.nodes[i];
  const std::string indent(static_cast<std::size_t>(2 * depth), ' ');
  const GroupCounts& c = n.counts;
  char stats[160];
  std::snprintf(stats, sizeof(stats),
                "N^T=%lld N^C=%lld Y^T=%lld Y^C=%lld uplift=%.4f",
                static_cast<long long>(c.n_t), static_cast<long long>(c.n_c),
                static_cast<long long>(c.y_t), static_cast<long long>(c.y_c),
                n.uplift);
  if (n.is_leaf()) {
    out << indent << "leaf " << stats << "\n";
    return;
  }
  out << indent << n.feature << " <= " << Format("%.4f", n.threshold) << "  ["
      << stats << "]\n";
  RenderNode(tree, static_cast<std::size_t>(n.left), depth + 1, out);
  out << indent << n.feature << " > " << Format("%.4f", n.threshold) << "\n";
  RenderNode(tree, static_cast<std::size_t>(n.right), depth + 1, out);
}

}  // namespace

std::string RenderRuleTable(const RuleSetModel& model) {
  if (model.rules.empty()) {
    return "no rules; default uplift = " + Format("%.4f", model.default_uplift) +
           "\n";
  }
  std::size_t depth = 0;
  for (const Rule& r : model.rules) depth = std::max(depth, r.conditions.size());

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"rule number"};
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    header.push_back("\"" + std::to_string(i + 1) + "\"");
  }
  grid.push_back(header);
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<std::string> row = {"node logic"};
    for (const Rule& r : model.rules) {
      row.push_back(d < r.conditions.size() ? ConditionText(r.conditions[d])
                                            : "null");
    }
    grid.push_back(row);
  }
  auto counts_row = [&](const char* label, auto field) {
    std::vector<std::string> row = {label};
    for (const Rule& r : model.rules) row.push_back(std::to_string(field(r)));
    grid.push_back(row);
  };
  counts_row("N_before", [](const Rule& r) { return r.stats_before.total(); });
  counts_row("N_before^T", [](const Rule& r) { return r.stats_before.n_t; });
  counts_row("N_before^C", [](const Rule& r) { return r.stats_before.n_c; });
  counts_row("N_rule", [](const Rule& r) { return r.stats_rule.total(); });
  counts_row("N_rule^T", [](const Rule& r) { return r.stats_rule.n_t; });
  counts_row("N_rule^C", [](const Rule& r) { return r.stats_rule.n_c; });
  std::vector<std::string> gain = {"net gain"};
  std::vector<std::string> uplift = {"uplift"};
  std::vector<std::string> rec_t = {"recall_treatment"};
  std::vector<std::string> rec_c = {"recall_control"};
  for (const Rule& r : model.rules) {
    gain.push_back(Format("%.2f", r.net_gain));
    uplift.push_back(Format("%.4f", r.uplift()));
    rec_t.push_back(Percent(r.recall_treatment));
    rec_c.push_back(Percent(r.recall_control));
  }
  grid.push_back(gain);
  grid.push_back(uplift);
  grid.push_back(rec_t);
  grid.push_back(rec_c);
  return RenderGrid(grid) +
         "default uplift = " + Format("%.4f", model.default_uplift) + "\n";
}

std::string RenderTree(const BaselineTree& tree) {
  std::ostringstream out;
  if (!tree.nodes.empty()) RenderNode(tree, 0, 0, out);
  out << tree.num_leaves() << " leaves\n";
  return out.str();
}

void WriteCurveCsv(const UpliftEvaluation& eval, std::ostream& out) {
  out << "t,fraction,f,g,random_f,optimal_g\n";
  char buf[256];
  const double n = static_cast<double>(eval.n);
  for (std::size_t t = 0; t < eval.f.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", t,
                  n > 0 ? static_cast<double>(t) / n : 0.0, eval.f[t],
                  eval.g[t], eval.random_f[t], eval.optimal_g[t]);
    out << buf;
  }
}

std::string RenderUpliftSvg(std::span<const NamedEvaluation> curves,
                            const std::string& title) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  const double width = 640, height = 440;
  const double left = 60, right = 160, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double lo = 0.0, hi = 0.0;
  for (const NamedEvaluation& c : curves) {
    for (double v : c.eval->f) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  auto x_of = [&](double frac) { return left + frac * plot_w; };
  auto y_of = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << title
      << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double frac = k / 4.0;
    const double v = lo + frac * (hi - lo);
    svg << "<text x=\"" << x_of(frac) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << Format("%.2f", frac) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y_of(v) + 4
        << "\" text-anchor=\"end\">" << Format("%.0f", v) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">fraction of population targeted</text>\n";

  auto polyline = [&](const std::vector<double>& values, const char* color,
                      const char* extra) {
    const std::size_t n = values.size() - 1;
    const std::size_t stride = std::max<std::size_t>(1, n / 1000);
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"" << extra << " points=\"";
    for (std::size_t t = 0; t <= n; t += stride) {
      svg << Format("%.2f", x_of(n ? static_cast<double>(t) / n : 0.0)) << ","
          << Format("%.2f", y_of(values[t])) << " ";
    }
    if (n % stride != 0) {
      svg << Format("%.2f", x_of(1.0)) << "," << Format("%.2f", y_of(values[n]));
    }
    svg << "\"/>\n";
  };

  if (!curves.empty() && curves.front().eval->f.size() > 1) {
    polyline(curves.front().eval->random_f, "#777",
             " stroke-dasharray=\"6,4\"");
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].eval->f.size() < 2) continue;
    polyline(curves[i].eval->f, kColors[i % 6], "");
  }
  for (std::size_t i = 0; i <= curves.size(); ++i) {
    const double y = top + 16 + 18.0 * static_cast<double>(i);
    const double x = left + plot_w + 12;
    const bool random = i == curves.size();
    svg << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 24
        << "\" y2=\"" << y - 4 << "\" stroke=\""
        << (random ? "#777" : kColors[i % 6]) << "\" stroke-width=\"2\""
        << (random ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    svg << "<text x=\"" << x + 30 << "\" y=\"" << y << "\">"
        << (random ? std::string("random") : curves[i].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ciet
