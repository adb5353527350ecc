#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entsim/bench.hpp"
#include "entsim/experiment.hpp"

namespace {

using entsim::angles_for_p;
using entsim::BenchArgKind;
using entsim::BenchArgument;
using entsim::BenchFile;
using entsim::BenchKeyword;
using entsim::BenchParseResult;
using entsim::BenchRunResult;
using entsim::BenchStatement;
using entsim::BenchValidation;
using entsim::CircuitSpec;
using entsim::DomainError;
using entsim::elaborate_and_run;
using entsim::measure;
using entsim::NoiseModel;
using entsim::OutputIntensities;
using entsim::parse_bench;
using entsim::prepare;
using entsim::print_bench;
using entsim::resolved_parameters;
using entsim::validate;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string bench_path(const char* name) {
  return std::string(ENTSIM_SOURCE_DIR) + "/bench/" + name;
}

/// Straight-line re-implementation of the dataflow rules, used to
/// cross-check validate on shuffled files.  Returns true iff the file is
/// semantically valid.
bool reference_valid(const BenchFile& file) {
  std::set<std::string> params;
  std::set<std::string> live;
  bool have_source = false;
  bool have_output = false;
  std::size_t output_index = 0;
  std::vector<std::string> ports;

  const auto refs_ok = [&](const BenchStatement& s) {
    for (const auto& arg : s.args)
      if (arg.kind == BenchArgKind::kNumber && arg.is_ref &&
          params.count(arg.text) == 0)
        return false;
    return true;
  };
  const auto take = [&](const std::vector<std::string>& in,
                        const std::vector<std::string>& out) {
    for (const auto& p : in) {
      if (live.count(p) == 0) return false;
      live.erase(p);
    }
    std::set<std::string> fresh;
    for (const auto& p : out) {
      if (!fresh.insert(p).second) continue;
      if (live.count(p) > 0) return false;
    }
    live.insert(out.begin(), out.end());
    return true;
  };

  for (std::size_t i = 0; i < file.statements.size(); ++i) {
    const BenchStatement& s = file.statements[i];
    if (!refs_ok(s)) return false;
    switch (s.keyword) {
      case BenchKeyword::kParam:
        if (!params.insert(s.find("name")->text).second) return false;
        break;
      case BenchKeyword::kSource:
        if (have_source) return false;
        have_source = true;
        live.insert(s.find("path")->text);
        break;
      case BenchKeyword::kOutput:
        if (have_output) return false;
        have_output = true;
        output_index = i;
        ports = s.find("ports")->list;
        break;
      case BenchKeyword::kHwp:
      case BenchKeyword::kDp:
      case BenchKeyword::kMirror:
      case BenchKeyword::kPhase:
      case BenchKeyword::kSwp:
      case BenchKeyword::kBlock:
      case BenchKeyword::kCnot:
        if (live.count(s.find("path")->text) == 0) return false;
        break;
      case BenchKeyword::kPbs: {
        const auto& in = s.find("in")->list;
        if (in.size() == 2 && in[0] == in[1]) return false;
        if (!take(in, {s.find("transmit")->text, s.find("reflect")->text}))
          return false;
        break;
      }
      case BenchKeyword::kBs: {
        const auto& in = s.find("in")->list;
        const auto& out = s.find("out")->list;
        if (in[0] == in[1] || out[0] == out[1]) return false;
        if (!take(in, out)) return false;
        break;
      }
      case BenchKeyword::kMzim:
      case BenchKeyword::kDmzim: {
        const std::string& even = s.find("even")->text;
        const std::string& odd = s.find("odd")->text;
        if (even == odd) return false;
        if (!take({s.find("path")->text}, {even, odd})) return false;
        const auto* nu = s.find("nu");
        if (nu != nullptr && !nu->is_ref &&
            (nu->number < 0.0 || nu->number > 1.0))
          return false;
        break;
      }
    }
  }
  if (!have_source || !have_output) return false;
  if (output_index + 1 != file.statements.size()) return false;
  std::set<std::string> seen;
  for (const auto& p : ports) {
    if (!seen.insert(p).second) return false;
    if (live.count(p) == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parse accepts a plain statement", "[dsl]") {
  const BenchParseResult r = parse_bench("HWP path=E0 theta=30");
  REQUIRE(r.ok());
  REQUIRE(r.file.statements.size() == 1);
  const BenchStatement& s = r.file.statements[0];
  REQUIRE(s.keyword == BenchKeyword::kHwp);
  REQUIRE(s.line == 1);
  REQUIRE(s.find("path") != nullptr);
  REQUIRE(s.find("path")->text == "E0");
  REQUIRE(s.find("theta") != nullptr);
  REQUIRE_FALSE(s.find("theta")->is_ref);
  REQUIRE(s.find("theta")->number == 30.0);
}

TEST_CASE("parse reports a malformed number with its position", "[dsl]") {
  const BenchParseResult r = parse_bench("HWP path=E0 theta=banana");
  REQUIRE(r.file.statements.empty());
  REQUIRE(r.errors.size() == 1);
  REQUIRE(r.errors[0].line == 1);
  REQUIRE(r.errors[0].column == 19);
  REQUIRE(r.errors[0].message.find("banana") != std::string::npos);
}

TEST_CASE("parse collects every error and keeps going", "[dsl]") {
  const std::string text =
      "LASER path=X\n"
      "HWP path=E0 theta=1 theta=2\n"
      "# comment only\n"
      "HWP path=E0\n"
      "PBS in=A,B,C transmit=T reflect=R\n"
      "HWP path=E0 theta=0\n";
  const BenchParseResult r = parse_bench(text);
  REQUIRE(r.errors.size() == 4);
  REQUIRE(r.errors[0].line == 1);
  REQUIRE(r.errors[0].message.find("LASER") != std::string::npos);
  REQUIRE(r.errors[1].line == 2);
  REQUIRE(r.errors[1].message.find("duplicate argument") !=
          std::string::npos);
  REQUIRE(r.errors[2].line == 4);
  REQUIRE(r.errors[2].message.find("missing argument 'theta'") !=
          std::string::npos);
  REQUIRE(r.errors[3].line == 5);
  REQUIRE(r.errors[3].message.find("between 1 and 2") != std::string::npos);
  REQUIRE(r.file.statements.size() == 1);
  REQUIRE(r.file.statements[0].line == 6);
}

TEST_CASE("parse grammar corner cases", "[dsl]") {
  REQUIRE_FALSE(parse_bench("HWP path=E0 theta").ok());
  REQUIRE_FALSE(parse_bench("HWP path=E0 =3").ok());
  REQUIRE_FALSE(parse_bench("HWP path=E0 theta=").ok());
  REQUIRE_FALSE(parse_bench("HWP path=9x theta=0").ok());
  REQUIRE_FALSE(parse_bench("HWP path=E0 foo=3").ok());
  REQUIRE_FALSE(parse_bench("PARAM name=x default=$y").ok());
  REQUIRE_FALSE(parse_bench("HWP path=E0 theta=$9").ok());
  REQUIRE_FALSE(parse_bench("PBS in=A, transmit=T reflect=R").ok());

  // References, comments, blank lines, CRLF endings.
  const BenchParseResult r = parse_bench(
      "\r\n"
      "PARAM name=t default=-4.5e-1   # trailing comment\r\n"
      "HWP path=E0 theta=$t\r\n");
  REQUIRE(r.ok());
  REQUIRE(r.file.statements.size() == 2);
  REQUIRE(r.file.statements[0].find("default")->number == -0.45);
  REQUIRE(r.file.statements[1].find("theta")->is_ref);
  REQUIRE(r.file.statements[1].find("theta")->text == "t");
}

TEST_CASE("print and parse round-trip the shipped benches", "[dsl]") {
  for (const char* name : {"fig1.bench", "cnot_only.bench",
                           "mzim_only.bench"}) {
    CAPTURE(name);
    const BenchParseResult first = parse_bench(read_file(bench_path(name)));
    REQUIRE(first.ok());
    const BenchParseResult second = parse_bench(print_bench(first.file));
    REQUIRE(second.ok());
    REQUIRE(first.file == second.file);
  }
}

TEST_CASE("print and parse round-trip random files", "[dsl]") {
  std::mt19937 rng(20260819);
  const auto coin = [&] { return rng() % 2 == 0; };
  const auto ident = [&] {
    std::string s(1, static_cast<char>('A' + rng() % 26));
    for (unsigned k = rng() % 4; k > 0; --k)
      s += static_cast<char>('0' + rng() % 10);
    return s;
  };
  const auto number = [&]() -> double {
    switch (rng() % 4) {
      case 0:
        return static_cast<double>(static_cast<int>(rng() % 200) - 100);
      case 1:
        return std::uniform_real_distribution<double>(-50.0, 50.0)(rng);
      case 2:
        return std::uniform_real_distribution<double>(-1.0, 1.0)(rng) * 1e-7;
      default:
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
  };

  for (int trial = 0; trial < 50; ++trial) {
    BenchFile file;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) {
      const auto& kw =
          entsim::bench_detail::kKeywords[rng() % 14];
      BenchStatement s;
      s.keyword = kw.keyword;
      for (std::size_t a = 0; a < kw.arg_count; ++a) {
        const auto& spec = kw.args[a];
        if (!spec.required && coin()) continue;
        BenchArgument arg;
        arg.key = spec.key;
        arg.kind = spec.kind;
        switch (spec.kind) {
          case BenchArgKind::kNumber:
            if (spec.allow_ref && coin()) {
              arg.is_ref = true;
              arg.text = ident();
            } else {
              arg.number = number();
            }
            break;
          case BenchArgKind::kLabel:
            arg.text = ident();
            break;
          case BenchArgKind::kLabelList: {
            const int items =
                spec.min_items +
                static_cast<int>(rng() %
                                 (spec.max_items - spec.min_items + 1));
            for (int j = 0; j < items; ++j) arg.list.push_back(ident());
            break;
          }
        }
        s.args.push_back(std::move(arg));
      }
      file.statements.push_back(std::move(s));
    }
    const BenchParseResult reparsed = parse_bench(print_bench(file));
    CAPTURE(trial, print_bench(file));
    REQUIRE(reparsed.ok());
    REQUIRE(reparsed.file == file);
  }
}

TEST_CASE("the shipped decay bench validates with 19 elements", "[dsl]") {
  const BenchParseResult parsed =
      parse_bench(read_file(bench_path("fig1.bench")));
  REQUIRE(parsed.ok());
  const BenchValidation v = validate(parsed.file);
  REQUIRE(v.ok());
  REQUIRE(v.spec.elements.size() == 19);
  REQUIRE(v.spec.source_path == "E0");
  REQUIRE(v.spec.source_component == entsim::kCompVh);
  REQUIRE(v.spec.output_ports ==
          std::vector<std::string>{"O1", "O2", "O3", "O4", "O5", "O6", "O7",
                                   "O8"});
  REQUIRE(v.spec.params.size() == 5);
  REQUIRE(v.spec.params[0].name == "theta1");
  REQUIRE(v.spec.params[4].name == "nu_dmzim");
}

TEST_CASE("validate rejects semantic violations", "[dsl]") {
  const auto errors_of = [](const std::string& text) {
    const BenchParseResult parsed = parse_bench(text);
    REQUIRE(parsed.ok());
    return validate(parsed.file).errors;
  };

  SECTION("dangling path") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "HWP path=E9 theta=0\n"
        "OUTPUT ports=A\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].line == 2);
    REQUIRE(errs[0].message == "path 'E9' is not live here");
  }
  SECTION("visibility out of range") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "MZIM path=A even=B odd=C nu=1.2\n"
        "OUTPUT ports=B,C\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].message == "visibility must lie in [0, 1]");
  }
  SECTION("parameter used before declaration") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "HWP path=A theta=$late\n"
        "PARAM name=late default=0\n"
        "OUTPUT ports=A\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].line == 2);
    REQUIRE(errs[0].message.find("late") != std::string::npos);
  }
  SECTION("output label clobbers a live path") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "HWP path=A theta=22.5\n"
        "PBS in=A transmit=B reflect=C\n"
        "MZIM path=B even=C odd=D\n"
        "OUTPUT ports=C,D\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].message == "output label 'C' clobbers a live path");
  }
  SECTION("duplicate output port") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "OUTPUT ports=A,A\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].message == "duplicate output port 'A'");
  }
  SECTION("output must be last") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "OUTPUT ports=A\n"
        "MIRROR path=A\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].line == 2);
    REQUIRE(errs[0].message == "output declaration must be the final statement");
  }
  SECTION("port never produced") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "OUTPUT ports=A,Z\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].message == "output port 'Z' is never produced");
  }
  SECTION("missing source and outputs") {
    const auto errs = errors_of("MIRROR path=A\n");
    REQUIRE(errs.size() == 3);  // not live, no source, no outputs
  }
  SECTION("more than one source") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "SOURCE path=B state=Hh\n"
        "OUTPUT ports=A\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].message == "more than one source");
  }
  SECTION("unknown source state") {
    const auto errs = errors_of(
        "SOURCE path=A state=Qq\n"
        "OUTPUT ports=A\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].message.find("Qq") != std::string::npos);
  }
  SECTION("beam-splitter outputs must be distinct") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "BS in=A,A out=B,B\n"
        "OUTPUT ports=B\n");
    REQUIRE(errs.size() >= 2);  // duplicate input and duplicate output
  }
  SECTION("sorter ports must be distinct") {
    const auto errs = errors_of(
        "SOURCE path=A state=Vh\n"
        "DMZIM path=A even=B odd=B\n"
        "OUTPUT ports=B\n");
    REQUIRE_FALSE(errs.empty());
    REQUIRE(errs[0].message == "sorter ports must be distinct");
  }
  SECTION("non-finite angle") {
    const auto errs = errors_of(
        "PARAM name=t default=inf\n"
        "SOURCE path=A state=Vh\n"
        "HWP path=A theta=$t\n"
        "OUTPUT ports=A\n");
    REQUIRE(errs.size() == 1);
    REQUIRE(errs[0].message == "angle must be finite");
  }
}

TEST_CASE("validate agrees with an independent dataflow checker on shuffles",
          "[dsl]") {
  const BenchParseResult parsed =
      parse_bench(read_file(bench_path("fig1.bench")));
  REQUIRE(parsed.ok());
  REQUIRE(reference_valid(parsed.file));
  REQUIRE(validate(parsed.file).ok());

  std::mt19937 rng(911);
  int valid_count = 0;
  for (int trial = 0; trial < 300; ++trial) {
    BenchFile shuffled = parsed.file;
    std::shuffle(shuffled.statements.begin(), shuffled.statements.end(), rng);
    const bool expected = reference_valid(shuffled);
    const bool actual = validate(shuffled).ok();
    CAPTURE(trial, print_bench(shuffled));
    REQUIRE(actual == expected);
    if (expected) ++valid_count;
  }
  // Random order almost never respects the dataflow; the property above is
  // what matters, this guards against a vacuous checker.
  REQUIRE(valid_count < 150);

  // Swapping the two independent sorters preserves validity.
  BenchFile swapped = parsed.file;
  auto& st = swapped.statements;
  const auto is_dmzim = [](const BenchStatement& s) {
    return s.keyword == BenchKeyword::kDmzim;
  };
  const auto first = std::find_if(st.begin(), st.end(), is_dmzim);
  REQUIRE(first != st.end());
  const auto second = std::find_if(first + 1, st.end(), is_dmzim);
  REQUIRE(second != st.end());
  std::iter_swap(first, second);
  REQUIRE(reference_valid(swapped));
  REQUIRE(validate(swapped).ok());
}

TEST_CASE("the decay bench reproduces the programmatic circuit", "[dsl]") {
  const BenchValidation v =
      validate(parse_bench(read_file(bench_path("fig1.bench"))).file);
  REQUIRE(v.ok());

  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CAPTURE(p);
    const auto angles = angles_for_p(p);
    const BenchRunResult run = elaborate_and_run(
        v.spec,
        {{"theta1", angles.theta1_deg}, {"theta2", angles.theta2_deg}});
    const OutputIntensities direct = measure(prepare(angles));
    REQUIRE(run.intensities.size() == 8);
    for (int j = 0; j < 8; ++j) {
      CAPTURE(j);
      REQUIRE(run.intensities[j] == direct.intensity[j]);
    }
  }

  // Noise overrides stay equivalent as well.
  NoiseModel noise;
  noise.nu_prep = 0.97;
  noise.nu_dmzim = 0.93;
  const auto angles = angles_for_p(0.4);
  const BenchRunResult run =
      elaborate_and_run(v.spec, {{"theta1", angles.theta1_deg},
                                 {"theta2", angles.theta2_deg},
                                 {"nu_prep", noise.nu_prep},
                                 {"nu_dmzim", noise.nu_dmzim}});
  const OutputIntensities direct =
      measure(prepare(angles, entsim::kPrepCalibratedPhase, noise.nu_prep),
              noise);
  for (int j = 0; j < 8; ++j) {
    CAPTURE(j);
    REQUIRE(run.intensities[j] == direct.intensity[j]);
  }
}

TEST_CASE("the decay bench at defaults and at the rounded full-decay angles",
          "[dsl]") {
  const BenchValidation v =
      validate(parse_bench(read_file(bench_path("fig1.bench"))).file);
  REQUIRE(v.ok());

  const BenchRunResult idle = elaborate_and_run(v.spec);
  REQUIRE(idle.intensities[4] == Catch::Approx(0.5).epsilon(0.0).margin(1e-12));
  REQUIRE(idle.intensities[5] == Catch::Approx(0.5).epsilon(0.0).margin(1e-12));

  const BenchRunResult full = elaborate_and_run(
      v.spec, {{"theta1", 30.0}, {"theta2", -17.6324}});
  REQUIRE(full.intensities[0] == Catch::Approx(0.5).epsilon(0.0).margin(1e-4));
  REQUIRE(full.intensities[5] == Catch::Approx(0.5).epsilon(0.0).margin(1e-4));
  for (int j : {1, 2, 3, 4, 6, 7}) {
    CAPTURE(j);
    REQUIRE(full.intensities[j] <= 1e-8);
  }
}

TEST_CASE("a fully blocked bench yields darkness and a degenerate readout",
          "[dsl]") {
  std::istringstream in(read_file(bench_path("fig1.bench")));
  std::string line;
  std::string text;
  while (std::getline(in, line)) {
    if (line.rfind("OUTPUT", 0) == 0) {
      for (int j = 1; j <= 8; ++j)
        text += "BLOCK path=O" + std::to_string(j) + "\n";
    }
    text += line + "\n";
  }
  const BenchValidation v = validate(parse_bench(text).file);
  REQUIRE(v.ok());
  REQUIRE(v.spec.elements.size() == 27);
  const BenchRunResult run = elaborate_and_run(v.spec);
  OutputIntensities dark;
  for (int j = 0; j < 8; ++j) {
    REQUIRE(run.intensities[j] == 0.0);
    dark.intensity[j] = run.intensities[j];
  }
  REQUIRE_THROWS_AS(entsim::populations(dark), DomainError);
}

TEST_CASE("parameter overrides resolve against declarations", "[dsl]") {
  const BenchValidation v =
      validate(parse_bench(read_file(bench_path("fig1.bench"))).file);
  REQUIRE(v.ok());

  const auto env = resolved_parameters(v.spec, {{"theta1", 30.0}});
  REQUIRE(env.at("theta1") == 30.0);
  REQUIRE(env.at("theta2") == 0.0);
  REQUIRE(env.at("nu_prep") == 1.0);

  REQUIRE_THROWS_AS(resolved_parameters(v.spec, {{"bogus", 1.0}}),
                    DomainError);
  REQUIRE_THROWS_AS(elaborate_and_run(v.spec, {{"bogus", 1.0}}), DomainError);
}

TEST_CASE("bench execution is deterministic", "[dsl]") {
  const BenchValidation v =
      validate(parse_bench(read_file(bench_path("fig1.bench"))).file);
  REQUIRE(v.ok());
  const std::map<std::string, double> overrides = {
      {"theta1", 25.0}, {"theta2", -12.0}, {"nu_dmzim", 0.93}};
  const BenchRunResult a = elaborate_and_run(v.spec, overrides);
  const BenchRunResult b = elaborate_and_run(v.spec, overrides);
  REQUIRE(std::memcmp(a.intensities.data(), b.intensities.data(),
                      sizeof(double) * a.intensities.size()) == 0);
}

TEST_CASE("the auxiliary benches run as documented", "[dsl]") {
  {
    const BenchValidation v =
        validate(parse_bench(read_file(bench_path("cnot_only.bench"))).file);
    REQUIRE(v.ok());
    const BenchRunResult r = elaborate_and_run(v.spec);
    REQUIRE(r.ports == std::vector<std::string>{"C1", "C2"});
    REQUIRE(r.intensities[0] == Catch::Approx(0.5).epsilon(0.0).margin(1e-12));
    REQUIRE(r.intensities[1] == Catch::Approx(0.5).epsilon(0.0).margin(1e-12));
  }
  {
    const BenchValidation v =
        validate(parse_bench(read_file(bench_path("mzim_only.bench"))).file);
    REQUIRE(v.ok());
    const BenchRunResult balanced = elaborate_and_run(v.spec);
    REQUIRE(balanced.intensities[0] == Catch::Approx(0.5).epsilon(0.0).margin(1e-12));
    REQUIRE(balanced.intensities[1] == Catch::Approx(0.5).epsilon(0.0).margin(1e-12));

    const BenchRunResult leaky =
        elaborate_and_run(v.spec, {{"theta", 0.0}, {"nu", 0.93}});
    REQUIRE(leaky.intensities[0] == Catch::Approx(0.965).epsilon(0.0).margin(1e-12));
    REQUIRE(leaky.intensities[1] == Catch::Approx(0.035).epsilon(0.0).margin(1e-12));
  }
}
