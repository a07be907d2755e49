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

// Tournament artifacts: CSV tables, JSON summary and SVG figures. Every
// writer is a pure function of its input, so identical results give
// byte-identical files.

#ifndef IPD_REPORT_H_
#define IPD_REPORT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ipd/tournament.h"

namespace ipd {

inline constexpr int kResultFormatVersion = 1;

namespace artifacts {
inline constexpr const char* kRepetitions = "repetitions.csv";
inline constexpr const char* kPairwise = "pairwise.csv";
inline constexpr const char* kCooperation = "cooperation.csv";
inline constexpr const char* kSummary = "summary.json";
inline constexpr const char* kScoresSvg = "scores.svg";
inline constexpr const char* kWinsSvg = "wins.svg";
inline constexpr const char* kRanksSvg = "ranks.svg";
inline constexpr const char* kHeatmapSvg = "payoff_heatmap.svg";
}  // namespace artifacts

// player,repetition,score,wins,rank; repetitions are 1-based.
std::string RepetitionsCsv(const TournamentResult& result);
// Mean per-turn payoff of row player against column player, roster order.
std::string PairwiseCsv(const TournamentResult& result);
// player,opponent,t1..tN: repetitions in which player cooperated on each turn.
std::string CooperationCsv(const TournamentResult& result);

// Everything a summary needs: config echo, corpus hash and the per-player
// quantiles in median-score order.
nlohmann::ordered_json SummaryJson(const TournamentResult& result,
                                   std::string_view corpus_hash);

std::string SummaryTable(const std::vector<SummaryRow>& rows);

// SVG figures. NaN heatmap cells are drawn grey and labelled n/a.
std::string RenderHeatmap(std::string_view title,
                          const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& column_labels,
                          const std::vector<std::vector<double>>& values,
                          double low, double high);
// One box (quartiles, median line, min-max whiskers) per label.
std::string RenderDistribution(std::string_view title,
                               std::string_view axis_label,
                               const std::vector<std::string>& labels,
                               const std::vector<std::vector<double>>& samples);

enum class Metric { kScore, kWins, kRank };
// Per-player distributions over repetitions, players in median-score order.
std::string RenderMetricDistribution(const TournamentResult& result, Metric metric);
std::string RenderPayoffHeatmap(const TournamentResult& result);
// Opponents (in median-score order) against turn.
std::string RenderCooperationMap(const TournamentResult& result,
                                 std::string_view player);

// Writes the CSV, JSON and SVG artifacts. Returns the paths written.
std::vector<std::filesystem::path> WriteTournamentArtifacts(
    const TournamentResult& result, const std::filesystem::path& dir,
    std::string_view corpus_hash);

// Reads a directory written by WriteTournamentArtifacts. Throws
// std::runtime_error when files are missing or malformed.
TournamentResult LoadTournamentResult(const std::filesystem::path& dir);

// Writes `contents` to a temporary sibling and renames it into place.
void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view contents);
std::string ReadFile(const std::filesystem::path& path);

// File-system safe form of a player name.
std::string Slug(std::string_view name);

}  // namespace ipd

#endif  // IPD_REPORT_H_
