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

#include "ipd/serialization.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

namespace ipd {

ParseError::ParseError(std::size_t line, std::string field,
                       const std::string& message)
    : std::runtime_error(fmt::format("line {}: field '{}': {}", line, field, message)),
      line_(line),
      field_(std::move(field)) {}

std::string FormatReal(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

// Writing.

std::string KeySegment(std::size_t index, int offset, int length, int total) {
  if (length == 0) return "-";
  std::string s;
  for (int i = 0; i < length; ++i) {
    const int bit = total - 1 - (offset + i);
    s.push_back(((index >> bit) & 1u) ? 'D' : 'C');
  }
  return s;
}

std::string KeyText(const LookupShape& shape, std::size_t index) {
  const int total = shape.key_length();
  return fmt::format("{} {} {}", KeySegment(index, 0, shape.n1, total),
                     KeySegment(index, shape.n1, shape.m1, total),
                     KeySegment(index, shape.n1 + shape.m1, shape.m2, total));
}

std::string Reals(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s.push_back(' ');
    s += FormatReal(values[i]);
  }
  return s;
}

void WriteShape(const LookupShape& shape, std::string& out) {
  out += fmt::format("n1 {}\nm1 {}\nm2 {}\n", shape.n1, shape.m1, shape.m2);
}

void WriteBody(const StrategySpec& spec, std::string& out);

void WriteSpec(const StrategySpec& spec, std::string& out) {
  out += fmt::format("ipd-strategy {}\n", kSpecFormatVersion);
  out += fmt::format("name {}\n", spec.name);
  out += fmt::format("trained {}\n", spec.trained ? "true" : "false");
  out += fmt::format("archetype {}\n", ArchetypeName(spec.body));
  WriteBody(spec, out);
  out += "end\n";
}

void WriteBody(const StrategySpec& spec, std::string& out) {
  if (const auto* c = std::get_if<ClassicSpec>(&spec.body)) {
    out += fmt::format("key {}\nparameter {}\n", c->key, FormatReal(c->parameter));
  } else if (const auto* l = std::get_if<LookerUpSpec>(&spec.body)) {
    WriteShape(l->shape, out);
    for (std::size_t i = 0; i < l->table.size(); ++i) {
      out += fmt::format("row {} {}\n", KeyText(l->shape, i), ToChar(l->table[i]));
    }
  } else if (const auto* g = std::get_if<GamblerSpec>(&spec.body)) {
    WriteShape(g->shape, out);
    for (std::size_t i = 0; i < g->table.size(); ++i) {
      out += fmt::format("row {} {}\n", KeyText(g->shape, i), FormatReal(g->table[i]));
    }
  } else if (const auto* a = std::get_if<AnnSpec>(&spec.body)) {
    out += fmt::format("hidden_width {}\n", a->hidden_width);
    const std::span<const double> w(a->input_weights);
    for (int j = 0; j < a->hidden_width; ++j) {
      out += fmt::format(
          "weights {} {}\n", j,
          Reals(w.subspan(static_cast<std::size_t>(j) * kernels::kAnnInputs,
                          kernels::kAnnInputs)));
    }
    out += fmt::format("bias {}\n", Reals(a->input_bias));
    out += fmt::format("output {}\n", Reals(a->output_weights));
  } else if (const auto* f = std::get_if<FsmSpec>(&spec.body)) {
    out += fmt::format("states {}\ninitial_state {}\ninitial_action {}\n",
                       f->num_states, f->initial_state, ToChar(f->initial_action));
    for (std::size_t i = 0; i < f->transitions.size(); ++i) {
      out += fmt::format("transition {} {} {} {}\n", i / 2, i % 2 == 0 ? 'C' : 'D',
                         f->transitions[i].next_state,
                         ToChar(f->transitions[i].action));
    }
  } else if (const auto* h = std::get_if<HmmSpec>(&spec.body)) {
    out += fmt::format("states {}\ninitial_state {}\ninitial_action {}\n",
                       h->num_states, h->initial_state, ToChar(h->initial_action));
    const auto n = static_cast<std::size_t>(h->num_states);
    for (const auto& [label, m] :
         {std::pair{"transition_c", &h->transition_c},
          std::pair{"transition_d", &h->transition_d}}) {
      for (std::size_t r = 0; r < n; ++r) {
        out += fmt::format("{} {} {}\n", label, r,
                           Reals(std::span<const double>(*m).subspan(r * n, n)));
      }
    }
    out += fmt::format("emission {}\n", Reals(h->emission));
  } else if (const auto* m = std::get_if<MemoryOneSpec>(&spec.body)) {
    out += fmt::format("initial_action {}\nprobabilities {}\n",
                       ToChar(m->initial_action), Reals(m->probabilities));
  } else if (const auto* meta = std::get_if<MetaSpec>(&spec.body)) {
    out += fmt::format("rule {}\nteam {}\n",
                       meta->rule == MetaRule::kMajority ? "majority" : "winner",
                       meta->team.size());
    for (const StrategySpec& member : meta->team) WriteSpec(member, out);
  }
}

// Reading.

struct Line {
  std::size_t number;
  std::string field;
  std::vector<std::string> values;
  std::string rest;  // everything after the field name
};

std::vector<Line> Tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t eol = text.find('\n');
    std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::size_t first = raw.find_first_not_of(" \t");
    if (first == std::string_view::npos || raw[first] == '#') continue;
    raw.remove_prefix(first);
    Line line;
    line.number = number;
    const std::size_t space = raw.find_first_of(" \t");
    line.field = std::string(raw.substr(0, space));
    if (space != std::string_view::npos) {
      std::string_view rest = raw.substr(space + 1);
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) {
        rest.remove_suffix(1);
      }
      line.rest = std::string(rest);
      std::size_t pos = 0;
      while (pos < rest.size()) {
        const std::size_t start = rest.find_first_not_of(" \t", pos);
        if (start == std::string_view::npos) break;
        const std::size_t end = rest.find_first_of(" \t", start);
        line.values.emplace_back(rest.substr(start, end - start));
        pos = end == std::string_view::npos ? rest.size() : end;
      }
    }
    lines.push_back(std::move(line));
  }
  lines.push_back({number + 1, "", {}, ""});  // sentinel
  return lines;
}

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool AtEnd() const { return pos_ + 1 >= lines_.size(); }
  const Line& Peek() const { return lines_[pos_]; }

  const Line& Expect(std::string_view field) {
    const Line& line = lines_[pos_];
    if (AtEnd()) {
      throw ParseError(line.number, std::string(field),
                       "unexpected end of input, missing field");
    }
    if (line.field != field) {
      throw ParseError(line.number, std::string(field),
                       fmt::format("expected field '{}', found '{}'", field, line.field));
    }
    ++pos_;
    return line;
  }

  const Line& ExpectValues(std::string_view field, std::size_t count) {
    const Line& line = Expect(field);
    if (line.values.size() != count) {
      throw ParseError(line.number, std::string(field),
                       fmt::format("expected {} values, found {}", count,
                                   line.values.size()));
    }
    return line;
  }

  std::string Text(std::string_view field) {
    const Line& line = Expect(field);
    if (line.rest.empty()) {
      throw ParseError(line.number, std::string(field), "missing value");
    }
    return line.rest;
  }

  long Integer(std::string_view field) {
    const Line& line = ExpectValues(field, 1);
    return ParseInteger(line, 0);
  }

  double Real(std::string_view field) {
    const Line& line = ExpectValues(field, 1);
    return ParseReal(line, 0);
  }

  Action ParseAction(const Line& line, std::size_t i) const {
    const std::string& v = line.values[i];
    if (v.size() == 1) {
      if (auto a = ActionFromChar(v[0])) return *a;
    }
    throw ParseError(line.number, line.field,
                     fmt::format("'{}' is not an action (C or D)", v));
  }

  long ParseInteger(const Line& line, std::size_t i) const {
    const std::string& v = line.values[i];
    long value = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), value);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
      throw ParseError(line.number, line.field,
                       fmt::format("'{}' is not an integer", v));
    }
    return value;
  }

  double ParseReal(const Line& line, std::size_t i) const {
    const std::string& v = line.values[i];
    double value = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), value);
    bool ok = r.ec == std::errc() && r.ptr == v.data() + v.size();
    if (r.ec == std::errc::result_out_of_range) {
      // Subnormals report underflow; they still parse exactly with strtod.
      char* end = nullptr;
      value = std::strtod(v.c_str(), &end);
      ok = end == v.c_str() + v.size() && std::isfinite(value);
    }
    if (!ok || !std::isfinite(value)) {
      throw ParseError(line.number, line.field,
                       fmt::format("'{}' is not a finite real number", v));
    }
    return value;
  }

  std::vector<double> Reals(const Line& line, std::size_t first) const {
    std::vector<double> out;
    for (std::size_t i = first; i < line.values.size(); ++i) {
      out.push_back(ParseReal(line, i));
    }
    return out;
  }

  std::size_t LineNumber() const { return lines_[pos_].number; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

int SmallCount(Reader& in, std::string_view field, long low, long high) {
  const std::size_t line = in.LineNumber();
  const long v = in.Integer(field);
  if (v < low || v > high) {
    throw ParseError(line, std::string(field),
                     fmt::format("{} outside [{}, {}]", v, low, high));
  }
  return static_cast<int>(v);
}

LookupShape ReadShape(Reader& in) {
  LookupShape shape;
  shape.n1 = SmallCount(in, "n1", 0, 12);
  shape.m1 = SmallCount(in, "m1", 0, 12);
  shape.m2 = SmallCount(in, "m2", 0, 12);
  if (shape.key_length() > 20) {
    throw ParseError(in.LineNumber(), "m2", "key longer than 20 moves");
  }
  return shape;
}

// Checks the row's key is exactly the expected one and returns the value
// token's line.
const Line& ReadRow(Reader& in, const LookupShape& shape, std::size_t index) {
  const Line& line = in.ExpectValues("row", 4);
  const std::string expected = KeyText(shape, index);
  const std::string found = fmt::format("{} {} {}", line.values[0],
                                        line.values[1], line.values[2]);
  if (found != expected) {
    throw ParseError(line.number, "row",
                     fmt::format("expected key '{}', found '{}'", expected, found));
  }
  return line;
}

StrategySpec ReadSpec(Reader& in);

StrategyBody ReadBody(Reader& in, const std::string& archetype,
                      std::size_t archetype_line) {
  if (archetype == "classic") {
    ClassicSpec c;
    c.key = in.ExpectValues("key", 1).values[0];
    c.parameter = in.Real("parameter");
    return c;
  }
  if (archetype == "lookerup") {
    LookerUpSpec s;
    s.shape = ReadShape(in);
    s.table.resize(s.shape.table_size());
    for (std::size_t i = 0; i < s.table.size(); ++i) {
      const Line& line = ReadRow(in, s.shape, i);
      s.table[i] = in.ParseAction(line, 3);
    }
    return s;
  }
  if (archetype == "gambler") {
    GamblerSpec s;
    s.shape = ReadShape(in);
    s.table.resize(s.shape.table_size());
    for (std::size_t i = 0; i < s.table.size(); ++i) {
      const Line& line = ReadRow(in, s.shape, i);
      s.table[i] = in.ParseReal(line, 3);
    }
    return s;
  }
  if (archetype == "ann") {
    AnnSpec s;
    s.hidden_width = SmallCount(in, "hidden_width", 1, 4096);
    for (int j = 0; j < s.hidden_width; ++j) {
      const Line& line = in.ExpectValues("weights", 1 + kernels::kAnnInputs);
      if (in.ParseInteger(line, 0) != j) {
        throw ParseError(line.number, "weights",
                         fmt::format("expected hidden unit {}", j));
      }
      const auto row = in.Reals(line, 1);
      s.input_weights.insert(s.input_weights.end(), row.begin(), row.end());
    }
    const auto width = static_cast<std::size_t>(s.hidden_width);
    s.input_bias = in.Reals(in.ExpectValues("bias", width), 0);
    s.output_weights = in.Reals(in.ExpectValues("output", width), 0);
    return s;
  }
  if (archetype == "fsm") {
    FsmSpec s;
    s.num_states = SmallCount(in, "states", 1, 1 << 20);
    s.initial_state = static_cast<int>(in.Integer("initial_state"));
    {
      const Line& line = in.ExpectValues("initial_action", 1);
      s.initial_action = in.ParseAction(line, 0);
    }
    for (int state = 0; state < s.num_states; ++state) {
      for (Action opp : {kC, kD}) {
        const Line& line = in.ExpectValues("transition", 4);
        if (in.ParseInteger(line, 0) != state || in.ParseAction(line, 1) != opp) {
          throw ParseError(line.number, "transition",
                           fmt::format("expected key ({}, {})", state, ToChar(opp)));
        }
        s.transitions.push_back({static_cast<int>(in.ParseInteger(line, 2)),
                                 in.ParseAction(line, 3)});
      }
    }
    return s;
  }
  if (archetype == "hmm") {
    HmmSpec s;
    s.num_states = SmallCount(in, "states", 1, 4096);
    s.initial_state = static_cast<int>(in.Integer("initial_state"));
    {
      const Line& line = in.ExpectValues("initial_action", 1);
      s.initial_action = in.ParseAction(line, 0);
    }
    const auto n = static_cast<std::size_t>(s.num_states);
    for (auto [label, m] : {std::pair{"transition_c", &s.transition_c},
                            std::pair{"transition_d", &s.transition_d}}) {
      for (std::size_t r = 0; r < n; ++r) {
        const Line& line = in.ExpectValues(label, n + 1);
        if (in.ParseInteger(line, 0) != static_cast<long>(r)) {
          throw ParseError(line.number, label, fmt::format("expected row {}", r));
        }
        const auto row = in.Reals(line, 1);
        m->insert(m->end(), row.begin(), row.end());
      }
    }
    s.emission = in.Reals(in.ExpectValues("emission", n), 0);
    return s;
  }
  if (archetype == "memoryone") {
    MemoryOneSpec s;
    {
      const Line& line = in.ExpectValues("initial_action", 1);
      s.initial_action = in.ParseAction(line, 0);
    }
    const auto p = in.Reals(in.ExpectValues("probabilities", 4), 0);
    std::copy(p.begin(), p.end(), s.probabilities.begin());
    return s;
  }
  if (archetype == "meta") {
    MetaSpec s;
    const Line& rule = in.ExpectValues("rule", 1);
    if (rule.values[0] == "majority") {
      s.rule = MetaRule::kMajority;
    } else if (rule.values[0] == "winner") {
      s.rule = MetaRule::kWinner;
    } else {
      throw ParseError(rule.number, "rule",
                       fmt::format("unknown rule '{}'", rule.values[0]));
    }
    const int size = SmallCount(in, "team", 1, 100000);
    for (int i = 0; i < size; ++i) s.team.push_back(ReadSpec(in));
    return s;
  }
  throw ParseError(archetype_line, "archetype",
                   fmt::format("unknown archetype '{}'", archetype));
}

StrategySpec ReadSpec(Reader& in) {
  {
    const Line& header = in.ExpectValues("ipd-strategy", 1);
    if (in.ParseInteger(header, 0) != kSpecFormatVersion) {
      throw ParseError(header.number, "ipd-strategy",
                       fmt::format("unsupported format version {}", header.values[0]));
    }
  }
  StrategySpec spec;
  spec.name = in.Text("name");
  {
    const Line& line = in.ExpectValues("trained", 1);
    if (line.values[0] != "true" && line.values[0] != "false") {
      throw ParseError(line.number, "trained", "expected true or false");
    }
    spec.trained = line.values[0] == "true";
  }
  const std::size_t archetype_line = in.LineNumber();
  const std::string archetype = in.ExpectValues("archetype", 1).values[0];
  spec.body = ReadBody(in, archetype, archetype_line);
  in.ExpectValues("end", 0);
  return spec;
}

}  // namespace

std::string Serialize(const StrategySpec& spec) {
  std::string out;
  WriteSpec(spec, out);
  return out;
}

std::vector<StrategySpec> DeserializeAll(std::string_view text) {
  Reader in(Tokenize(text));
  std::vector<StrategySpec> specs;
  while (!in.AtEnd()) specs.push_back(ReadSpec(in));
  return specs;
}

StrategySpec Deserialize(std::string_view text) {
  Reader in(Tokenize(text));
  StrategySpec spec = ReadSpec(in);
  if (!in.AtEnd()) {
    throw ParseError(in.LineNumber(), in.Peek().field,
                     "trailing content after 'end'");
  }
  return spec;
}

}  // namespace ipd
