// Copyright 2026 The IPD Lab Authors
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

#include "ipd/report.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "ipd/serialization.h"

namespace ipd {

namespace fs = std::filesystem;

// Files.

void WriteFileAtomically(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
  }
  fs::rename(tmp, path);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Slug(std::string_view name) {
  std::string s;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      s.push_back(static_cast<char>(std::tolower(u)));
    } else if (!s.empty() && s.back() != '_') {
      s.push_back('_');
    }
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s.empty() ? "player" : s;
}

namespace {

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back().push_back(c);
    }
  }
  return fields;
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(SplitCsvLine(line));
  }
  return rows;
}

double ToDouble(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error(fmt::format("bad number '{}'", s));
  return v;
}

}  // namespace

// Tables.

std::string RepetitionsCsv(const TournamentResult& result) {
  std::string out = "player,repetition,score,wins,rank\n";
  for (std::size_t p = 0; p < result.size(); ++p) {
    for (int rep = 0; rep < result.repetitions; ++rep) {
      out += fmt::format("{},{},{},{},{}\n", CsvField(result.players[p]), rep + 1,
                         FormatReal(result.Score(rep, p)), result.wins[rep][p],
                         result.ranks[rep][p]);
    }
  }
  return out;
}

std::string PairwiseCsv(const TournamentResult& result) {
  std::string out = "player";
  for (const auto& name : result.players) out += "," + CsvField(name);
  out += "\n";
  for (std::size_t i = 0; i < result.size(); ++i) {
    out += CsvField(result.players[i]);
    for (std::size_t j = 0; j < result.size(); ++j) {
      out += "," + FormatReal(result.PairwisePayoff(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string CooperationCsv(const TournamentResult& result) {
  std::string out = "player,opponent";
  for (int t = 1; t <= result.turns; ++t) out += fmt::format(",t{}", t);
  out += "\n";
  const std::size_t n = result.size();
  const auto turns = static_cast<std::size_t>(result.turns);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && !result.include_self_play) continue;
      out += CsvField(result.players[i]) + "," + CsvField(result.players[j]);
      for (std::size_t t = 0; t < turns; ++t) {
        out += fmt::format(",{}", result.cooperation[(i * n + j) * turns + t]);
      }
      out += "\n";
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json QuantileJson(const Quantiles& q) {
  nlohmann::ordered_json j;
  j["min"] = q.min;
  j["q25"] = q.q25;
  j["median"] = q.median;
  j["q75"] = q.q75;
  j["max"] = q.max;
  return j;
}

}  // namespace

nlohmann::ordered_json SummaryJson(const TournamentResult& result,
                                   std::string_view corpus_hash) {
  nlohmann::ordered_json j;
  j["format_version"] = kResultFormatVersion;
  j["config"] = {
      {"players", result.players},
      {"turns", result.turns},
      {"noise", result.noise},
      {"repetitions", result.repetitions},
      {"seed", result.seed},
      {"include_self_play", result.include_self_play},
  };
  j["corpus_hash"] = std::string(corpus_hash);
  nlohmann::ordered_json players = nlohmann::ordered_json::array();
  for (const SummaryRow& row : Summarize(result, result.size())) {
    nlohmann::ordered_json p;
    p["name"] = row.name;
    p["score"] = QuantileJson(row.score);
    p["wins"] = QuantileJson(row.wins);
    p["rank"] = QuantileJson(row.rank);
    players.push_back(std::move(p));
  }
  j["players"] = std::move(players);
  return j;
}

std::string SummaryTable(const std::vector<SummaryRow>& rows) {
  std::size_t width = 6;
  for (const SummaryRow& r : rows) width = std::max(width, r.name.size());
  std::string out = fmt::format(
      "{:>4}  {:<{}}  {:>8} {:>8} {:>8}  {:>6} {:>6} {:>6}  {:>6} {:>6} {:>6}\n",
      "#", "Player", width, "Median", "Q25", "Q75", "Wins", "W.min", "W.max",
      "Rank", "R.min", "R.max");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const SummaryRow& r = rows[k];
    out += fmt::format(
        "{:>4}  {:<{}}  {:>8.4f} {:>8.4f} {:>8.4f}  {:>6g} {:>6g} {:>6g}  {:>6g} "
        "{:>6g} {:>6g}\n",
        k + 1, r.name, width, r.score.median, r.score.q25, r.score.q75,
        r.wins.median, r.wins.min, r.wins.max, r.rank.median, r.rank.min,
        r.rank.max);
  }
  return out;
}

// SVG.

namespace {

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Diverging blue - white - red ramp.
std::string Color(double value, double low, double high) {
  if (std::isnan(value)) return "#d9d9d9";
  double t = high > low ? (value - low) / (high - low) : 0.5;
  t = std::clamp(t, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5;
    r = static_cast<int>(std::lround(49 + (255 - 49) * s));
    g = static_cast<int>(std::lround(54 + (255 - 54) * s));
    b = static_cast<int>(std::lround(149 + (255 - 149) * s));
  } else {
    const double s = (t - 0.5) / 0.5;
    r = static_cast<int>(std::lround(255 + (165 - 255) * s));
    g = static_cast<int>(std::lround(255 + (0 - 255) * s));
    b = static_cast<int>(std::lround(255 + (38 - 255) * s));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

constexpr double kCell = 14.0;
constexpr double kLabelWidth = 170.0;
constexpr double kTitleHeight = 30.0;

// Rough extent of a 14px title, so the canvas never clips it.
double TitleWidth(std::string_view title) { return 20.0 + 7.5 * title.size(); }

}  // namespace

std::string RenderHeatmap(std::string_view title,
                          const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& column_labels,
                          const std::vector<std::vector<double>>& values,
                          double low, double high) {
  const double width =
      std::max(kLabelWidth + kCell * column_labels.size() + 20, TitleWidth(title));
  const double height = kTitleHeight + kLabelWidth + kCell * row_labels.size() + 20;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" "
      "height=\"{:.0f}\" font-family=\"sans-serif\" font-size=\"10\">\n",
      width, height);
  out += fmt::format("<text x=\"10\" y=\"20\" font-size=\"14\">{}</text>\n",
                     Escape(title));
  const double top = kTitleHeight + kLabelWidth;
  for (std::size_t c = 0; c < column_labels.size(); ++c) {
    const double x = kLabelWidth + kCell * c + kCell * 0.7;
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" transform=\"rotate(-90 {:.1f} {:.1f})\">"
        "{}</text>\n",
        x, top - 4, x, top - 4, Escape(column_labels[c]));
  }
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    const double y = top + kCell * r;
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n",
        kLabelWidth - 4, y + kCell * 0.75, Escape(row_labels[r]));
    for (std::size_t c = 0; c < column_labels.size(); ++c) {
      const double v = values[r][c];
      out += fmt::format(
          "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
          "fill=\"{}\"><title>{} / {}: {}</title></rect>\n",
          kLabelWidth + kCell * c, y, kCell, kCell, Color(v, low, high),
          Escape(row_labels[r]), Escape(column_labels[c]),
          std::isnan(v) ? std::string("n/a") : fmt::format("{:.4f}", v));
    }
  }
  out += "</svg>\n";
  return out;
}

std::string RenderDistribution(std::string_view title,
                               std::string_view axis_label,
                               const std::vector<std::string>& labels,
                               const std::vector<std::vector<double>>& samples) {
  constexpr double kPlotHeight = 300.0;
  constexpr double kSlot = 18.0;
  constexpr double kLeft = 60.0;
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto& s : samples) {
    for (double v : s) {
      if (first) {
        lo = hi = v;
        first = false;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = (hi - lo) * 0.05;
  lo -= pad;
  hi += pad;
  const double top = kTitleHeight + 10;
  const auto y_of = [&](double v) { return top + kPlotHeight * (hi - v) / (hi - lo); };

  const double width = std::max(kLeft + kSlot * labels.size() + 20, TitleWidth(title));
  const double height = top + kPlotHeight + kLabelWidth;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" "
      "height=\"{:.0f}\" font-family=\"sans-serif\" font-size=\"10\">\n",
      width, height);
  out += fmt::format("<text x=\"10\" y=\"20\" font-size=\"14\">{}</text>\n",
                     Escape(title));
  out += fmt::format(
      "<text x=\"12\" y=\"{:.1f}\" transform=\"rotate(-90 12 {:.1f})\" "
      "text-anchor=\"middle\">{}</text>\n",
      top + kPlotHeight / 2, top + kPlotHeight / 2, Escape(axis_label));
  out += fmt::format(
      "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" "
      "stroke=\"black\"/>\n",
      kLeft, top, kLeft, top + kPlotHeight);
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n",
        kLeft - 4, y_of(v) + 3, v);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Quantiles q = ComputeQuantiles(samples[i]);
    const double cx = kLeft + kSlot * i + kSlot / 2;
    const double half = kSlot * 0.3;
    out += fmt::format("<g><title>{}: median {:.4f}</title>\n", Escape(labels[i]),
                       q.median);
    out += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" "
        "stroke=\"black\"/>\n",
        cx, y_of(q.max), cx, y_of(q.min));
    out += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
        "fill=\"#9ecae1\" stroke=\"black\"/>\n",
        cx - half, y_of(q.q75), 2 * half, std::max(0.5, y_of(q.q25) - y_of(q.q75)));
    out += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" "
        "stroke=\"#d62728\" stroke-width=\"2\"/>\n",
        cx - half, y_of(q.median), cx + half, y_of(q.median));
    out += "</g>\n";
    const double ly = top + kPlotHeight + 6;
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" transform=\"rotate(90 {:.1f} {:.1f})\">"
        "{}</text>\n",
        cx - 3, ly, cx - 3, ly, Escape(labels[i]));
  }
  out += "</svg>\n";
  return out;
}

std::string RenderMetricDistribution(const TournamentResult& result, Metric metric) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> samples;
  for (std::size_t p : OrderByMedianScore(result)) {
    labels.push_back(result.players[p]);
    std::vector<double> s;
    for (int rep = 0; rep < result.repetitions; ++rep) {
      switch (metric) {
        case Metric::kScore: s.push_back(result.Score(rep, p)); break;
        case Metric::kWins: s.push_back(result.wins[rep][p]); break;
        case Metric::kRank: s.push_back(result.ranks[rep][p]); break;
      }
    }
    samples.push_back(std::move(s));
  }
  const std::string_view axis = metric == Metric::kScore  ? "Mean score per turn"
                                : metric == Metric::kWins ? "Wins per tournament"
                                                          : "Rank";
  const std::string title =
      fmt::format("{} over {} repetitions (ranked by median score)", axis,
                  result.repetitions);
  return RenderDistribution(title, axis, labels, samples);
}

std::string RenderPayoffHeatmap(const TournamentResult& result) {
  PayoffHeatmap map = MakePayoffHeatmap(result);
  // Without self-play the diagonal was never played.
  if (!result.include_self_play) {
    for (std::size_t i = 0; i < map.values.size(); ++i) {
      map.values[i][i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return RenderHeatmap("Mean score per turn of row players against column players",
                       map.players, map.players, map.values, 0.0, 5.0);
}

std::string RenderCooperationMap(const TournamentResult& result,
                                 std::string_view player) {
  const CooperationMap map = CooperationRates(result, player);
  std::vector<std::string> rows;
  std::vector<std::vector<double>> values;
  for (std::size_t p : OrderByMedianScore(result)) {
    const auto it = std::find(map.opponents.begin(), map.opponents.end(),
                              result.players[p]);
    if (it == map.opponents.end()) continue;
    rows.push_back(*it);
    values.push_back(map.rates[static_cast<std::size_t>(it - map.opponents.begin())]);
  }
  std::vector<std::string> columns;
  for (int t = 1; t <= result.turns; ++t) {
    columns.push_back(t == 1 || t % 25 == 0 ? std::to_string(t) : "");
  }
  return RenderHeatmap(fmt::format("Cooperation rate of {} by turn", player), rows,
                       columns, values, 0.0, 1.0);
}

std::vector<fs::path> WriteTournamentArtifacts(const TournamentResult& result,
                                               const fs::path& dir,
                                               std::string_view corpus_hash) {
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, std::string>> files = {
      {dir / artifacts::kRepetitions, RepetitionsCsv(result)},
      {dir / artifacts::kPairwise, PairwiseCsv(result)},
      {dir / artifacts::kCooperation, CooperationCsv(result)},
      {dir / artifacts::kSummary, SummaryJson(result, corpus_hash).dump(2) + "\n"},
      {dir / artifacts::kScoresSvg, RenderMetricDistribution(result, Metric::kScore)},
      {dir / artifacts::kWinsSvg, RenderMetricDistribution(result, Metric::kWins)},
      {dir / artifacts::kRanksSvg, RenderMetricDistribution(result, Metric::kRank)},
      {dir / artifacts::kHeatmapSvg, RenderPayoffHeatmap(result)},
  };
  std::vector<fs::path> written;
  for (const auto& [path, contents] : files) {
    WriteFileAtomically(path, contents);
    written.push_back(path);
  }
  return written;
}

TournamentResult LoadTournamentResult(const fs::path& dir) {
  for (const char* name : {artifacts::kSummary, artifacts::kRepetitions,
                           artifacts::kPairwise, artifacts::kCooperation}) {
    if (!fs::exists(dir / name)) {
      throw std::runtime_error(fmt::format("missing {}", (dir / name).string()));
    }
  }
  const auto summary = nlohmann::json::parse(ReadFile(dir / artifacts::kSummary));
  if (summary.value("format_version", 0) != kResultFormatVersion) {
    throw std::runtime_error("unsupported result format version");
  }
  const auto& config = summary.at("config");
  TournamentResult r;
  r.players = config.at("players").get<std::vector<std::string>>();
  r.turns = config.at("turns").get<int>();
  r.noise = config.at("noise").get<double>();
  r.repetitions = config.at("repetitions").get<int>();
  r.seed = config.at("seed").get<std::uint64_t>();
  r.include_self_play = config.at("include_self_play").get<bool>();
  const std::size_t n = r.size();
  const auto turns = static_cast<std::size_t>(r.turns);
  if (n < 2 || r.turns < 1 || r.repetitions < 1) {
    throw std::runtime_error("malformed summary config");
  }

  r.total_payoff.assign(r.repetitions, std::vector<std::int64_t>(n, 0));
  r.wins.assign(r.repetitions, std::vector<int>(n, 0));
  r.ranks.assign(r.repetitions, std::vector<int>(n, 0));
  const double per_player = static_cast<double>(r.turns) * r.opponents();
  const auto reps = ParseCsv(ReadFile(dir / artifacts::kRepetitions));
  for (std::size_t k = 1; k < reps.size(); ++k) {
    const auto& row = reps[k];
    if (row.size() != 5) throw std::runtime_error("malformed repetitions.csv");
    const int p = r.IndexOf(row[0]);
    const int rep = std::stoi(row[1]) - 1;
    if (p < 0 || rep < 0 || rep >= r.repetitions) {
      throw std::runtime_error("repetitions.csv does not match summary.json");
    }
    r.total_payoff[rep][p] = std::llround(ToDouble(row[2]) * per_player);
    r.wins[rep][p] = std::stoi(row[3]);
    r.ranks[rep][p] = std::stoi(row[4]);
  }

  r.pair_payoff.assign(n * n, 0);
  const auto pairwise = ParseCsv(ReadFile(dir / artifacts::kPairwise));
  if (pairwise.size() != n + 1) throw std::runtime_error("malformed pairwise.csv");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = pairwise[i + 1];
    if (row.size() != n + 1) throw std::runtime_error("malformed pairwise.csv");
    for (std::size_t j = 0; j < n; ++j) {
      r.pair_payoff[i * n + j] = std::llround(
          ToDouble(row[j + 1]) * static_cast<double>(r.turns) * r.repetitions);
    }
  }

  r.cooperation.assign(n * n * turns, 0);
  const auto coop = ParseCsv(ReadFile(dir / artifacts::kCooperation));
  for (std::size_t k = 1; k < coop.size(); ++k) {
    const auto& row = coop[k];
    if (row.size() != turns + 2) throw std::runtime_error("malformed cooperation.csv");
    const int i = r.IndexOf(row[0]);
    const int j = r.IndexOf(row[1]);
    if (i < 0 || j < 0) throw std::runtime_error("cooperation.csv: unknown player");
    for (std::size_t t = 0; t < turns; ++t) {
      r.cooperation[(static_cast<std::size_t>(i) * n + j) * turns + t] =
          static_cast<std::uint32_t>(std::stoul(row[t + 2]));
    }
  }
  return r;
}

}  // namespace ipd
