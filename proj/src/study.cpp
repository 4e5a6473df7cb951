/*
 * volseg: 3D volume resampling and segmentation evaluation toolkit
 *
 * Copyright 2026 The volseg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "volseg/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "volseg/metaimage.hpp"
#include "volseg/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace volseg {

std::vector<ResolutionStrategy> default_study_strategies() {
  return {ResolutionStrategy::half(),
          ResolutionStrategy::twice(),
          ResolutionStrategy::fixed({0.625, 0.625, 3.6}),
          ResolutionStrategy::fixed({0.625, 0.625, 1.5}),
          ResolutionStrategy::fixed({0.3125, 0.3125, 1.5})};
}

bool operator==(const PairwiseCell& a, const PairwiseCell& b) {
  return a.t == b.t && a.p == b.p && a.df == b.df && a.degenerate == b.degenerate;
}

bool StudyReport::operator==(const StudyReport& o) const {
  return strategy_labels == o.strategy_labels && case_ids == o.case_ids &&
         values == o.values && mean == o.mean && sd == o.sd && median == o.median &&
         pairwise == o.pairwise && excluded == o.excluded &&
         mask_mode_desc == o.mask_mode_desc && conventions == o.conventions &&
         version == o.version;
}

StudyReport run_study(const StudyConfig& cfg) {
  if (cfg.strategies.size() < 2) {
    throw ConfigError("the study needs >= 2 strategies for pairwise testing");
  }
#ifdef _OPENMP
  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#endif

  if (!fs::is_directory(cfg.dataset_dir)) {
    throw IoError("dataset directory not found: " + cfg.dataset_dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cfg.dataset_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mhd") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  StudyReport r;
  r.version = kVersion;
  r.mask_mode_desc = cfg.mask_mode.label();
  r.conventions =
      "voxel-center geometry; origin preserved across resampling; "
      "clamp-to-edge within half a voxel, background 0 beyond; "
      "output dims ceil(n*s_in/s_out); paired two-sided Student t-test";
  for (const auto& s : cfg.strategies) r.strategy_labels.push_back(s.label());

  // Cases run in sorted order; the kernels inside are parallel, so the
  // report is identical for every worker count.
  for (const auto& file : files) {
    const std::string case_id = file.stem().string();
    try {
      const Mask3 m = read_metaimage_mask(file.string());
      std::vector<double> row;
      row.reserve(cfg.strategies.size());
      for (const auto& strategy : cfg.strategies) {
        row.push_back(rdsc(m, strategy, cfg.mask_mode));
      }
      r.case_ids.push_back(case_id);
      r.values.push_back(std::move(row));
    } catch (const std::exception& e) {
      r.excluded.emplace_back(case_id, e.what());
    }
  }

  if (r.case_ids.size() < 2) {
    throw DataError("study needs >= 2 successful cases, got " +
                    std::to_string(r.case_ids.size()));
  }

  const std::size_t ns = cfg.strategies.size();
  std::vector<std::vector<double>> columns(ns);
  for (const auto& row : r.values) {
    for (std::size_t s = 0; s < ns; ++s) columns[s].push_back(row[s]);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    r.mean.push_back(volseg::mean(columns[s]));
    r.sd.push_back(stddev_sample(columns[s]));
    r.median.push_back(volseg::median(columns[s]));
  }

  const int df = int(r.case_ids.size()) - 1;
  r.pairwise.assign(ns, std::vector<PairwiseCell>(ns, PairwiseCell{0.0, 1.0, df, false}));
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = i + 1; j < ns; ++j) {
      const TTestResult t = paired_t_test(columns[i], columns[j]);
      r.pairwise[i][j] = {t.t, t.p, t.df, t.degenerate_variance};
      r.pairwise[j][i] = {-t.t, t.p, t.df, t.degenerate_variance};
    }
  }
  return r;
}

void emit_report_csv(const StudyReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "case";
  for (const auto& s : r.strategy_labels) out << "," << s;
  out << "\n";
  char buf[32];
  for (std::size_t c = 0; c < r.case_ids.size(); ++c) {
    out << r.case_ids[c];
    for (double v : r.values[c]) {
      std::snprintf(buf, sizeof(buf), "%.6f", v);
      out << "," << buf;
    }
    out << "\n";
  }
  out.flush();
  if (!out) throw IoError("failed writing CSV report: " + path);
}

namespace {

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? json("inf") : json("-inf");
}

double from_finite_or_string(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const double inf = std::numeric_limits<double>::infinity();
    if (s == "inf") return inf;
    if (s == "-inf") return -inf;
    throw ParseError("unexpected numeric string '" + s + "' in report JSON");
  }
  return j.get<double>();
}

}  // namespace

void emit_report_json(const StudyReport& r, const std::string& path) {
  json j;
  j["version"] = r.version;
  j["provenance"]["mask_mode"] = r.mask_mode_desc;
  j["provenance"]["conventions"] = r.conventions;
  json excluded = json::array();
  for (const auto& [case_id, reason] : r.excluded) {
    excluded.push_back({{"case", case_id}, {"reason", reason}});
  }
  j["provenance"]["excluded"] = excluded;
  j["strategies"] = r.strategy_labels;
  j["cases"] = r.case_ids;
  j["values"] = r.values;
  j["aggregates"]["mean"] = r.mean;
  j["aggregates"]["sd"] = r.sd;
  j["aggregates"]["median"] = r.median;

  json tm = json::array(), pm = json::array(), dm = json::array(), gm = json::array();
  for (const auto& row : r.pairwise) {
    json tr = json::array(), pr = json::array(), dr = json::array(), gr = json::array();
    for (const auto& cell : row) {
      tr.push_back(finite_or_string(cell.t));
      pr.push_back(cell.p);
      dr.push_back(cell.df);
      gr.push_back(cell.degenerate);
    }
    tm.push_back(tr);
    pm.push_back(pr);
    dm.push_back(dr);
    gm.push_back(gr);
  }
  j["pairwise"]["t"] = tm;
  j["pairwise"]["p"] = pm;
  j["pairwise"]["df"] = dm;
  j["pairwise"]["degenerate"] = gm;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  out.flush();
  if (!out) throw IoError("failed writing JSON report: " + path);
}

StudyReport read_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("invalid report JSON in " + path + ": " + e.what());
  }
  StudyReport r;
  try {
    r.version = j.at("version").get<std::string>();
    r.mask_mode_desc = j.at("provenance").at("mask_mode").get<std::string>();
    r.conventions = j.at("provenance").at("conventions").get<std::string>();
    for (const auto& e : j.at("provenance").at("excluded")) {
      r.excluded.emplace_back(e.at("case").get<std::string>(),
                              e.at("reason").get<std::string>());
    }
    r.strategy_labels = j.at("strategies").get<std::vector<std::string>>();
    r.case_ids = j.at("cases").get<std::vector<std::string>>();
    r.values = j.at("values").get<std::vector<std::vector<double>>>();
    r.mean = j.at("aggregates").at("mean").get<std::vector<double>>();
    r.sd = j.at("aggregates").at("sd").get<std::vector<double>>();
    r.median = j.at("aggregates").at("median").get<std::vector<double>>();
    const auto& tm = j.at("pairwise").at("t");
    const auto& pm = j.at("pairwise").at("p");
    const auto& dm = j.at("pairwise").at("df");
    const auto& gm = j.at("pairwise").at("degenerate");
    for (std::size_t i = 0; i < tm.size(); ++i) {
      std::vector<PairwiseCell> row;
      for (std::size_t k = 0; k < tm[i].size(); ++k) {
        row.push_back({from_finite_or_string(tm[i][k]), pm[i][k].get<double>(),
                       dm[i][k].get<int>(), gm[i][k].get<bool>()});
      }
      r.pairwise.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw ParseError("report JSON missing fields in " + path + ": " + e.what());
  }
  return r;
}

void emit_boxplot_svg(const StudyReport& r, const std::string& path) {
  if (r.strategy_labels.empty()) throw ConfigError("box plot needs >= 1 strategy");
  const std::size_t ns = r.strategy_labels.size();

  const double left = 70.0, top = 30.0, plot_h = 340.0, slot_w = 150.0;
  const double width = left + slot_w * double(ns) + 20.0;
  const double height = top + plot_h + 60.0;
  auto ypix = [top, plot_h](double v) { return top + (1.0 - v) * plot_h; };

  std::ostringstream svg;
  char buf[256];
  auto fmt = [&buf](const char* f, auto... args) {
    std::snprintf(buf, sizeof(buf), f, args...);
    return std::string(buf);
  };

  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(width)
      << "\" height=\"" << int(height) << "\" viewBox=\"0 0 " << int(width) << " "
      << int(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << int(width / 2)
      << "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">rDSC by resampling strategy</text>\n";

  // y axis with ticks on the [0,1] rDSC scale
  svg << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
             left - 10.0, ypix(1.0), left - 10.0, ypix(0.0));
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = double(tick) / 4.0;
    svg << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
               left - 16.0, ypix(v), left - 10.0, ypix(v));
    svg << fmt("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\">%.2f</text>\n",
               left - 20.0, ypix(v) + 4.0, v);
  }

  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> vals;
    for (const auto& row : r.values) vals.push_back(row[s]);
    const double q1 = quantile(vals, 0.25);
    const double q2 = quantile(vals, 0.50);
    const double q3 = quantile(vals, 0.75);
    const double iqr = q3 - q1;
    const double lo_fence = q1 - 1.5 * iqr;
    const double hi_fence = q3 + 1.5 * iqr;
    double lo_w = q1, hi_w = q3;
    std::vector<double> outliers;
    for (double v : vals) {
      if (v < lo_fence || v > hi_fence) {
        outliers.push_back(v);
      } else {
        lo_w = std::min(lo_w, v);
        hi_w = std::max(hi_w, v);
      }
    }

    const double cx = left + slot_w * (double(s) + 0.5);
    const double half = 35.0;
    svg << fmt("<g class=\"box\" data-label=\"%s\" data-q1=\"%.12g\" data-median=\"%.12g\" "
               "data-q3=\"%.12g\" data-lo=\"%.12g\" data-hi=\"%.12g\">\n",
               r.strategy_labels[s].c_str(), q1, q2, q3, lo_w, hi_w);
    // whisker stem and caps
    svg << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
               cx, ypix(lo_w), cx, ypix(hi_w));
    svg << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
               cx - half / 2.0, ypix(lo_w), cx + half / 2.0, ypix(lo_w));
    svg << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
               cx - half / 2.0, ypix(hi_w), cx + half / 2.0, ypix(hi_w));
    // interquartile box and median
    svg << fmt("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
               "fill=\"#9ecae1\" stroke=\"black\"/>\n",
               cx - half, ypix(q3), 2.0 * half, std::max(0.0, ypix(q1) - ypix(q3)));
    svg << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\" "
               "stroke-width=\"2\"/>\n",
               cx - half, ypix(q2), cx + half, ypix(q2));
    for (double v : outliers) {
      svg << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n",
                 cx, ypix(v));
    }
    svg << fmt("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
               cx, top + plot_h + 24.0, r.strategy_labels[s].c_str());
    svg << "</g>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << svg.str();
  out.flush();
  if (!out) throw IoError("failed writing SVG: " + path);
}

}  // namespace volseg
