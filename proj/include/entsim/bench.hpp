#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "entsim/beam.hpp"
#include "entsim/elements.hpp"
#include "entsim/errors.hpp"

namespace entsim {

/// Statement keywords of the bench-description language.
enum class BenchKeyword {
  kParam,
  kSource,
  kOutput,
  kHwp,
  kDp,
  kPbs,
  kBs,
  kMirror,
  kPhase,
  kSwp,
  kBlock,
  kMzim,
  kDmzim,
  kCnot,
};

/// Kinds of argument values a statement may carry.
enum class BenchArgKind {
  kNumber,     ///< literal double or $parameter reference
  kLabel,      ///< single identifier (path, port, name, state)
  kLabelList,  ///< comma-separated identifiers
};

/// One key=value pair of a statement.
struct BenchArgument {
  std::string key;
  BenchArgKind kind = BenchArgKind::kNumber;
  double number = 0.0;             ///< kNumber literal value
  bool is_ref = false;             ///< kNumber: value written as $text
  std::string text;                ///< reference name or label
  std::vector<std::string> list;   ///< kLabelList items
  int column = 0;

  /// Structural equality; the column is layout, not content.
  friend bool operator==(const BenchArgument& a, const BenchArgument& b) {
    return a.key == b.key && a.kind == b.kind && a.number == b.number &&
           a.is_ref == b.is_ref && a.text == b.text && a.list == b.list;
  }
};

/// One parsed statement with its source position.
struct BenchStatement {
  BenchKeyword keyword = BenchKeyword::kParam;
  std::vector<BenchArgument> args;
  int line = 0;
  int column = 0;

  const BenchArgument* find(std::string_view key) const {
    for (const auto& a : args)
      if (a.key == key) return &a;
    return nullptr;
  }

  /// Structural equality; positions are layout, not content.
  friend bool operator==(const BenchStatement& a, const BenchStatement& b) {
    return a.keyword == b.keyword && a.args == b.args;
  }
};

/// A parsed bench file: the ordered statement list.
struct BenchFile {
  std::vector<BenchStatement> statements;

  friend bool operator==(const BenchFile& a, const BenchFile& b) {
    return a.statements == b.statements;
  }
};

/// A positioned parse or validation message.
struct BenchDiagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

/// Result of parse_bench: statements plus every error found.  Parsing is
/// total; a malformed line is reported and skipped, never fatal.
struct BenchParseResult {
  BenchFile file;
  std::vector<BenchDiagnostic> errors;

  bool ok() const { return errors.empty(); }
};

namespace bench_detail {

struct ArgSpec {
  const char* key;
  BenchArgKind kind;
  bool required;
  bool allow_ref;  ///< kNumber only: may the value be a $reference
  int min_items;   ///< kLabelList only
  int max_items;   ///< kLabelList only
};

struct KeywordSpec {
  BenchKeyword keyword;
  const char* name;
  const ArgSpec* args;
  std::size_t arg_count;
};

inline constexpr ArgSpec kParamArgs[] = {
    {"name", BenchArgKind::kLabel, true, false, 0, 0},
    {"default", BenchArgKind::kNumber, true, false, 0, 0},
};
inline constexpr ArgSpec kSourceArgs[] = {
    {"path", BenchArgKind::kLabel, true, false, 0, 0},
    {"state", BenchArgKind::kLabel, true, false, 0, 0},
};
inline constexpr ArgSpec kOutputArgs[] = {
    {"ports", BenchArgKind::kLabelList, true, false, 1, 16},
};
inline constexpr ArgSpec kPlateArgs[] = {
    {"path", BenchArgKind::kLabel, true, false, 0, 0},
    {"theta", BenchArgKind::kNumber, true, true, 0, 0},
};
inline constexpr ArgSpec kPbsArgs[] = {
    {"in", BenchArgKind::kLabelList, true, false, 1, 2},
    {"transmit", BenchArgKind::kLabel, true, false, 0, 0},
    {"reflect", BenchArgKind::kLabel, true, false, 0, 0},
};
inline constexpr ArgSpec kBsArgs[] = {
    {"in", BenchArgKind::kLabelList, true, false, 2, 2},
    {"out", BenchArgKind::kLabelList, true, false, 2, 2},
};
inline constexpr ArgSpec kPathOnlyArgs[] = {
    {"path", BenchArgKind::kLabel, true, false, 0, 0},
};
inline constexpr ArgSpec kPhaseArgs[] = {
    {"path", BenchArgKind::kLabel, true, false, 0, 0},
    {"phi", BenchArgKind::kNumber, true, true, 0, 0},
};
inline constexpr ArgSpec kSorterArgs[] = {
    {"path", BenchArgKind::kLabel, true, false, 0, 0},
    {"even", BenchArgKind::kLabel, true, false, 0, 0},
    {"odd", BenchArgKind::kLabel, true, false, 0, 0},
    {"nu", BenchArgKind::kNumber, false, true, 0, 0},
};
inline constexpr ArgSpec kCnotArgs[] = {
    {"path", BenchArgKind::kLabel, true, false, 0, 0},
    {"phi", BenchArgKind::kNumber, false, true, 0, 0},
};

inline constexpr KeywordSpec kKeywords[] = {
    {BenchKeyword::kParam, "PARAM", kParamArgs, 2},
    {BenchKeyword::kSource, "SOURCE", kSourceArgs, 2},
    {BenchKeyword::kOutput, "OUTPUT", kOutputArgs, 1},
    {BenchKeyword::kHwp, "HWP", kPlateArgs, 2},
    {BenchKeyword::kDp, "DP", kPlateArgs, 2},
    {BenchKeyword::kPbs, "PBS", kPbsArgs, 3},
    {BenchKeyword::kBs, "BS", kBsArgs, 2},
    {BenchKeyword::kMirror, "MIRROR", kPathOnlyArgs, 1},
    {BenchKeyword::kPhase, "PHASE", kPhaseArgs, 2},
    {BenchKeyword::kSwp, "SWP", kPathOnlyArgs, 1},
    {BenchKeyword::kBlock, "BLOCK", kPathOnlyArgs, 1},
    {BenchKeyword::kMzim, "MZIM", kSorterArgs, 4},
    {BenchKeyword::kDmzim, "DMZIM", kSorterArgs, 4},
    {BenchKeyword::kCnot, "CNOT", kCnotArgs, 2},
};

inline const KeywordSpec& keyword_spec(BenchKeyword kw) {
  for (const auto& spec : kKeywords)
    if (spec.keyword == kw) return spec;
  return kKeywords[0];  // unreachable for valid enum values
}

inline const KeywordSpec* find_keyword(std::string_view name) {
  for (const auto& spec : kKeywords)
    if (name == spec.name) return &spec;
  return nullptr;
}

inline const ArgSpec* find_arg_spec(const KeywordSpec& kw,
                                    std::string_view key) {
  for (std::size_t i = 0; i < kw.arg_count; ++i)
    if (key == kw.args[i].key) return &kw.args[i];
  return nullptr;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto head = static_cast<unsigned char>(s.front());
  if (!std::isalpha(head) && s.front() != '_') return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_') return false;
  }
  return true;
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_bench_number(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

}  // namespace bench_detail

/// Parses bench text.  One statement per line; '#' starts a comment;
/// statements are KEYWORD key=value pairs separated by blanks.  All errors
/// are collected with line and column positions; offending lines are
/// skipped.
inline BenchParseResult parse_bench(std::string_view text) {
  using bench_detail::ArgSpec;
  using bench_detail::find_arg_spec;
  using bench_detail::find_keyword;
  using bench_detail::is_identifier;
  using bench_detail::KeywordSpec;

  BenchParseResult result;

  const auto parse_line = [&](std::string_view line, int line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    struct Token {
      std::string_view text;
      int column;
    };
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      const std::size_t begin = i;
      while (i < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[i])))
        ++i;
      tokens.push_back(
          {line.substr(begin, i - begin), static_cast<int>(begin) + 1});
    }
    if (tokens.empty()) return;

    const auto error = [&](int column, std::string message) {
      result.errors.push_back({line_no, column, std::move(message)});
    };

    const KeywordSpec* kw = find_keyword(tokens[0].text);
    if (kw == nullptr) {
      error(tokens[0].column,
            "unknown keyword '" + std::string(tokens[0].text) + "'");
      return;
    }

    BenchStatement stmt;
    stmt.keyword = kw->keyword;
    stmt.line = line_no;
    stmt.column = tokens[0].column;
    bool bad = false;
    std::set<std::string, std::less<>> seen_keys;

    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t].text;
      const int col = tokens[t].column;
      const auto eq = tok.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == tok.size()) {
        error(col, "expected key=value, got '" + std::string(tok) + "'");
        bad = true;
        continue;
      }
      const std::string_view key = tok.substr(0, eq);
      const std::string_view value = tok.substr(eq + 1);
      const int value_col = col + static_cast<int>(eq) + 1;

      const ArgSpec* spec = find_arg_spec(*kw, key);
      if (spec == nullptr) {
        error(col, "unknown argument '" + std::string(key) + "' for " +
                       kw->name);
        bad = true;
        continue;
      }
      if (!seen_keys.insert(std::string(key)).second) {
        error(col, "duplicate argument '" + std::string(key) + "'");
        bad = true;
        continue;
      }

      BenchArgument arg;
      arg.key = std::string(key);
      arg.kind = spec->kind;
      arg.column = value_col;
      switch (spec->kind) {
        case BenchArgKind::kNumber:
          if (!value.empty() && value.front() == '$') {
            const std::string_view name = value.substr(1);
            if (!spec->allow_ref) {
              error(value_col, "argument '" + std::string(key) +
                                   "' expects a literal number");
              bad = true;
              continue;
            }
            if (!is_identifier(name)) {
              error(value_col, "invalid parameter reference '" +
                                   std::string(value) + "'");
              bad = true;
              continue;
            }
            arg.is_ref = true;
            arg.text = std::string(name);
          } else if (!bench_detail::parse_double(value, arg.number)) {
            error(value_col, "expected a number for '" + std::string(key) +
                                 "', got '" + std::string(value) + "'");
            bad = true;
            continue;
          }
          break;
        case BenchArgKind::kLabel:
          if (!is_identifier(value)) {
            error(value_col, "invalid label '" + std::string(value) +
                                 "' for '" + std::string(key) + "'");
            bad = true;
            continue;
          }
          arg.text = std::string(value);
          break;
        case BenchArgKind::kLabelList: {
          std::vector<std::string> items;
          std::size_t pos = 0;
          bool items_ok = true;
          while (pos <= value.size()) {
            const auto comma = value.find(',', pos);
            const std::string_view item = value.substr(
                pos, comma == std::string_view::npos ? std::string_view::npos
                                                     : comma - pos);
            if (!is_identifier(item)) {
              error(value_col, "invalid label '" + std::string(item) +
                                   "' in '" + std::string(key) + "'");
              items_ok = false;
              break;
            }
            items.push_back(std::string(item));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
          }
          if (!items_ok) {
            bad = true;
            continue;
          }
          const int n = static_cast<int>(items.size());
          if (n < spec->min_items || n > spec->max_items) {
            error(value_col,
                  "argument '" + std::string(key) + "' expects between " +
                      std::to_string(spec->min_items) + " and " +
                      std::to_string(spec->max_items) + " labels");
            bad = true;
            continue;
          }
          arg.list = std::move(items);
          break;
        }
      }
      stmt.args.push_back(std::move(arg));
    }

    for (std::size_t a = 0; a < kw->arg_count; ++a) {
      if (kw->args[a].required && seen_keys.count(kw->args[a].key) == 0) {
        error(stmt.column, std::string("missing argument '") +
                               kw->args[a].key + "' for " + kw->name);
        bad = true;
      }
    }

    if (!bad) result.file.statements.push_back(std::move(stmt));
  };

  std::size_t start = 0;
  int line_no = 1;
  while (true) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line = text.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start);
    parse_line(line, line_no);
    if (end == std::string_view::npos) break;
    start = end + 1;
    ++line_no;
  }
  return result;
}

/// Serializes statements back to bench text, one per line.  Numbers use the
/// shortest form that parses back to the identical double, so
/// parse_bench(print_bench(f)) reproduces f statement for statement.
inline std::string print_bench(const BenchFile& file) {
  std::string out;
  for (const auto& stmt : file.statements) {
    out += bench_detail::keyword_spec(stmt.keyword).name;
    for (const auto& arg : stmt.args) {
      out += ' ';
      out += arg.key;
      out += '=';
      switch (arg.kind) {
        case BenchArgKind::kNumber:
          if (arg.is_ref) {
            out += '$';
            out += arg.text;
          } else {
            out += bench_detail::format_bench_number(arg.number);
          }
          break;
        case BenchArgKind::kLabel:
          out += arg.text;
          break;
        case BenchArgKind::kLabelList:
          for (std::size_t i = 0; i < arg.list.size(); ++i) {
            if (i > 0) out += ',';
            out += arg.list[i];
          }
          break;
      }
    }
    out += '\n';
  }
  return out;
}

/// A named, overridable bench parameter with its default value.
struct BenchParam {
  std::string name;
  double value = 0.0;
};

/// An executable circuit: the validated element statements plus source and
/// output declarations.  Immutable after validation and shareable across
/// threads.
struct CircuitSpec {
  std::vector<BenchParam> params;
  std::string source_path;
  ComponentIndex source_component = kCompVh;
  std::vector<BenchStatement> elements;
  std::vector<std::string> output_ports;
};

/// Result of validate: the executable spec plus every semantic error.
struct BenchValidation {
  CircuitSpec spec;
  std::vector<BenchDiagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Checks dataflow (every consumed path was produced earlier and is still
/// live), parameter declaration order, visibility ranges, finite angles and
/// phases, single source, and a unique, final output declaration.
inline BenchValidation validate(const BenchFile& file) {
  BenchValidation v;
  std::map<std::string, double> params;
  std::set<std::string> live;
  bool have_source = false;
  bool have_output = false;
  std::size_t output_index = 0;

  const auto error = [&](const BenchStatement& s, int column,
                         std::string message) {
    v.errors.push_back({s.line, column, std::move(message)});
  };

  const auto resolve = [&](const BenchStatement& s, const char* key,
                           double fallback) -> std::optional<double> {
    const BenchArgument* a = s.find(key);
    if (a == nullptr) return fallback;
    if (a->is_ref) {
      const auto it = params.find(a->text);
      if (it == params.end()) {
        error(s, a->column,
              "parameter '" + a->text + "' is not declared at this point");
        return std::nullopt;
      }
      return it->second;
    }
    return a->number;
  };

  const auto require_live = [&](const BenchStatement& s,
                                const std::string& path) {
    if (live.count(path) == 0)
      error(s, s.column, "path '" + path + "' is not live here");
  };

  const auto check_finite = [&](const BenchStatement& s, const char* key,
                                double fallback, const char* what) {
    const auto value = resolve(s, key, fallback);
    if (value.has_value() && !std::isfinite(*value))
      error(s, s.column, std::string(what) + " must be finite");
  };

  // Consumes the inputs and brings the outputs live.  An output label must
  // be fresh or one of the inputs consumed by this very statement.
  const auto rewire = [&](const BenchStatement& s,
                          const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs) {
    for (const auto& in : inputs) {
      require_live(s, in);
      live.erase(in);
    }
    std::set<std::string> seen;
    for (const auto& out : outputs) {
      if (!seen.insert(out).second) continue;
      if (live.count(out) > 0)
        error(s, s.column,
              "output label '" + out + "' clobbers a live path");
    }
    live.insert(outputs.begin(), outputs.end());
  };

  for (std::size_t idx = 0; idx < file.statements.size(); ++idx) {
    const BenchStatement& s = file.statements[idx];
    switch (s.keyword) {
      case BenchKeyword::kParam: {
        const std::string& name = s.find("name")->text;
        if (params.count(name) > 0) {
          error(s, s.column, "duplicate parameter '" + name + "'");
          break;
        }
        const double value = s.find("default")->number;
        params.emplace(name, value);
        v.spec.params.push_back({name, value});
        break;
      }
      case BenchKeyword::kSource: {
        if (have_source) {
          error(s, s.column, "more than one source");
          break;
        }
        have_source = true;
        const std::string& state = s.find("state")->text;
        if (state == "Hh") {
          v.spec.source_component = kCompHh;
        } else if (state == "Hv") {
          v.spec.source_component = kCompHv;
        } else if (state == "Vh") {
          v.spec.source_component = kCompVh;
        } else if (state == "Vv") {
          v.spec.source_component = kCompVv;
        } else {
          error(s, s.find("state")->column,
                "unknown source state '" + state +
                    "' (expected Hh, Hv, Vh, or Vv)");
        }
        v.spec.source_path = s.find("path")->text;
        live.insert(v.spec.source_path);
        break;
      }
      case BenchKeyword::kOutput: {
        if (have_output) {
          error(s, s.column, "more than one output declaration");
          break;
        }
        have_output = true;
        output_index = idx;
        std::set<std::string> seen;
        for (const auto& port : s.find("ports")->list) {
          if (!seen.insert(port).second)
            error(s, s.find("ports")->column,
                  "duplicate output port '" + port + "'");
        }
        v.spec.output_ports = s.find("ports")->list;
        break;
      }
      case BenchKeyword::kHwp:
      case BenchKeyword::kDp:
        require_live(s, s.find("path")->text);
        check_finite(s, "theta", 0.0, "angle");
        v.spec.elements.push_back(s);
        break;
      case BenchKeyword::kPhase:
        require_live(s, s.find("path")->text);
        check_finite(s, "phi", 0.0, "phase");
        v.spec.elements.push_back(s);
        break;
      case BenchKeyword::kCnot:
        require_live(s, s.find("path")->text);
        check_finite(s, "phi", kCnotCalibratedPhase, "phase");
        v.spec.elements.push_back(s);
        break;
      case BenchKeyword::kMirror:
      case BenchKeyword::kSwp:
      case BenchKeyword::kBlock:
        require_live(s, s.find("path")->text);
        v.spec.elements.push_back(s);
        break;
      case BenchKeyword::kPbs: {
        const auto& in = s.find("in")->list;
        if (in.size() == 2 && in[0] == in[1])
          error(s, s.find("in")->column,
                "duplicate input path '" + in[0] + "'");
        rewire(s, in, {s.find("transmit")->text, s.find("reflect")->text});
        v.spec.elements.push_back(s);
        break;
      }
      case BenchKeyword::kBs: {
        const auto& in = s.find("in")->list;
        const auto& out = s.find("out")->list;
        if (in[0] == in[1])
          error(s, s.find("in")->column,
                "duplicate input path '" + in[0] + "'");
        if (out[0] == out[1])
          error(s, s.find("out")->column,
                "beam-splitter outputs must be distinct");
        rewire(s, in, out);
        v.spec.elements.push_back(s);
        break;
      }
      case BenchKeyword::kMzim:
      case BenchKeyword::kDmzim: {
        const std::string& even = s.find("even")->text;
        const std::string& odd = s.find("odd")->text;
        if (even == odd)
          error(s, s.column, "sorter ports must be distinct");
        rewire(s, {s.find("path")->text}, {even, odd});
        const auto nu = resolve(s, "nu", 1.0);
        if (nu.has_value() &&
            (std::isnan(*nu) || *nu < 0.0 || *nu > 1.0))
          error(s, s.column, "visibility must lie in [0, 1]");
        v.spec.elements.push_back(s);
        break;
      }
    }
  }

  if (!have_source) v.errors.push_back({1, 1, "no source declared"});
  if (!have_output) {
    v.errors.push_back({1, 1, "no outputs declared"});
  } else {
    const BenchStatement& out_stmt = file.statements[output_index];
    if (output_index + 1 != file.statements.size())
      v.errors.push_back({out_stmt.line, out_stmt.column,
                          "output declaration must be the final statement"});
    for (const auto& port : v.spec.output_ports) {
      if (live.count(port) == 0)
        v.errors.push_back({out_stmt.line, out_stmt.column,
                            "output port '" + port + "' is never produced"});
    }
  }
  return v;
}

/// Final state of a bench run plus the intensity at each declared port, in
/// declaration order.
struct BenchRunResult {
  BeamState state;
  std::vector<std::string> ports;
  std::vector<double> intensities;
};

/// Parameter environment of a run: declaration defaults overlaid with the
/// given overrides.  An override naming an undeclared parameter is a
/// domain error.
inline std::map<std::string, double> resolved_parameters(
    const CircuitSpec& spec,
    const std::map<std::string, double>& overrides = {}) {
  std::map<std::string, double> env;
  for (const auto& p : spec.params) env[p.name] = p.value;
  for (const auto& [name, value] : overrides) {
    if (env.count(name) == 0)
      throw DomainError("unknown parameter override '" + name + "'");
    env[name] = value;
  }
  return env;
}

/// Executes a validated spec: builds the source state, applies each element
/// in order, and reads the declared output intensities.
inline BenchRunResult elaborate_and_run(
    const CircuitSpec& spec,
    const std::map<std::string, double>& overrides = {}) {
  const std::map<std::string, double> env =
      resolved_parameters(spec, overrides);

  const auto value = [&](const BenchStatement& s, const char* key,
                         double fallback) {
    const BenchArgument* a = s.find(key);
    if (a == nullptr) return fallback;
    if (a->is_ref) return env.at(a->text);
    return a->number;
  };

  BeamState state = BeamState::single(spec.source_path, spec.source_component);
  for (const BenchStatement& s : spec.elements) {
    switch (s.keyword) {
      case BenchKeyword::kHwp:
        state = apply_half_wave_plate(state, s.find("path")->text,
                                      value(s, "theta", 0.0));
        break;
      case BenchKeyword::kDp:
        state = apply_dove_prism(state, s.find("path")->text,
                                 value(s, "theta", 0.0));
        break;
      case BenchKeyword::kPbs:
        state = apply_pbs(state, s.find("in")->list, s.find("transmit")->text,
                          s.find("reflect")->text);
        break;
      case BenchKeyword::kBs:
        state = apply_bs(state, s.find("in")->list,
                         {s.find("out")->list[0], s.find("out")->list[1]});
        break;
      case BenchKeyword::kMirror:
        state = apply_mirror(state, s.find("path")->text);
        break;
      case BenchKeyword::kPhase:
        state = apply_phase(state, s.find("path")->text, value(s, "phi", 0.0));
        break;
      case BenchKeyword::kSwp:
        state = apply_swave_plate(state, s.find("path")->text);
        break;
      case BenchKeyword::kBlock:
        state = apply_blocker(state, s.find("path")->text);
        break;
      case BenchKeyword::kMzim:
        state = mzim_parity_sort(state, s.find("path")->text,
                                 s.find("even")->text, s.find("odd")->text,
                                 value(s, "nu", 1.0));
        break;
      case BenchKeyword::kDmzim:
        state = dmzim_sort(state, s.find("path")->text, s.find("even")->text,
                           s.find("odd")->text, value(s, "nu", 1.0));
        break;
      case BenchKeyword::kCnot:
        state = cnot_gate(state, s.find("path")->text,
                          value(s, "phi", kCnotCalibratedPhase));
        break;
      case BenchKeyword::kParam:
      case BenchKeyword::kSource:
      case BenchKeyword::kOutput:
        break;  // never stored in elements
    }
  }

  BenchRunResult result{state, spec.output_ports, {}};
  result.intensities.reserve(spec.output_ports.size());
  for (const auto& port : spec.output_ports)
    result.intensities.push_back(state.intensity(port));
  return result;
}

}  // namespace entsim
