/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blockdsa/catalog.hpp"
#include "blockdsa/interpreter.hpp"
#include "blockdsa/project.hpp"

namespace blockdsa {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kBudgetExceeded = 2;
inline constexpr int kInputExhausted = 3;
}  // namespace exit_code

inline int exit_code_for(Termination t) {
  switch (t) {
    case Termination::Completed: return exit_code::kOk;
    case Termination::BudgetExceeded: return exit_code::kBudgetExceeded;
    case Termination::InputExhausted: return exit_code::kInputExhausted;
  }
  return exit_code::kOk;
}

/// Diagnostics that stop a program from running. DS_KIND_MISMATCH is a
/// best-effort warning: the same mistake is reported at run time with the
/// learner-facing message.
inline bool blocks_execution(const Diagnostics& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.code != diag::kDsKindMismatch; });
}

inline std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// One answer per line; a trailing newline does not add an empty answer.
inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(start, nl - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = nl + 1;
  }
  return out;
}

struct RunConfig {
  std::string project_path;
  std::string inputs_file;
  std::vector<std::string> inline_inputs;
  std::uint64_t seed = 0;
  std::uint64_t step_budget = kDefaultStepBudget;
  std::string format = "text";
  bool interactive = false;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
};

namespace cli_detail {

// Parses and validates; prints the report and returns nullopt when the
// project cannot run.
inline std::optional<Project> load_runnable(const std::string& path, Streams io, Diagnostics* warnings = nullptr) {
  auto bytes = read_file(path);
  if (!bytes) {
    io.err << "cannot read " << path << "\n";
    return std::nullopt;
  }
  auto parsed = parse_project(*bytes);
  if (auto* ds = std::get_if<Diagnostics>(&parsed)) {
    io.err << render_report(*ds);
    return std::nullopt;
  }
  auto project = std::get<Project>(std::move(parsed));
  auto ds = validate_project(project);
  if (blocks_execution(ds)) {
    io.err << render_report(ds);
    return std::nullopt;
  }
  if (warnings) *warnings = std::move(ds);
  return project;
}

inline int run_interactive(const Project& project, const RunConfig& cfg, Streams io) {
  Interpreter interp(project, RunOptions{cfg.seed, cfg.step_budget});
  std::size_t shown = 0;
  auto flush_events = [&] {
    SessionResult partial;
    const auto& events = interp.transcript();
    partial.transcript.assign(events.begin() + static_cast<std::ptrdiff_t>(shown), events.end());
    shown = events.size();
    std::string text = render_text(partial);
    io.out << text.substr(0, text.find("--- variables ---"));
    io.out.flush();
  };
  while (interp.resume() == Interpreter::State::WaitingForInput) {
    flush_events();
    io.out << "> ";
    io.out.flush();
    std::string line;
    if (!std::getline(io.in, line)) {
      interp.abandon_input();
      break;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    interp.provide_answer(std::move(line));
  }
  const auto result = interp.result();
  SessionResult tail = result;
  tail.transcript.erase(tail.transcript.begin(), tail.transcript.begin() + static_cast<std::ptrdiff_t>(shown));
  io.out << render_text(tail);
  return exit_code_for(result.status);
}

}  // namespace cli_detail

inline int cmd_validate(const std::string& path, Streams io) {
  auto bytes = read_file(path);
  if (!bytes) {
    io.err << "cannot read " << path << "\n";
    return exit_code::kInvalid;
  }
  auto parsed = parse_project(*bytes);
  Diagnostics ds = std::holds_alternative<Diagnostics>(parsed) ? std::get<Diagnostics>(parsed)
                                                               : validate_project(std::get<Project>(parsed));
  if (ds.empty()) {
    io.out << path << ": ok\n";
    return exit_code::kOk;
  }
  io.out << render_report(ds);
  return exit_code::kInvalid;
}

inline int cmd_run(const RunConfig& cfg, Streams io) {
  Diagnostics warnings;
  auto project = cli_detail::load_runnable(cfg.project_path, io, &warnings);
  if (!project) return exit_code::kInvalid;
  io.err << render_report(warnings);

  if (cfg.interactive) return cli_detail::run_interactive(*project, cfg, io);

  std::vector<std::string> inputs;
  if (!cfg.inputs_file.empty()) {
    auto text = read_file(cfg.inputs_file);
    if (!text) {
      io.err << "cannot read " << cfg.inputs_file << "\n";
      return exit_code::kInvalid;
    }
    inputs = split_lines(*text);
  }
  inputs.insert(inputs.end(), cfg.inline_inputs.begin(), cfg.inline_inputs.end());

  const auto result = run(*project, inputs, cfg.seed, cfg.step_budget);
  io.out << (cfg.format == "json" ? serialize_result(result) : render_text(result));
  return exit_code_for(result.status);
}

inline int cmd_catalog(bool markdown, Streams io) {
  io.out << (markdown ? catalog_markdown() : catalog_document());
  return exit_code::kOk;
}

/// A bundled reference program: <name>.blockdsa.json with optional
/// <name>.inputs.txt and golden transcripts <name>.golden.txt / .golden.json.
struct CorpusEntry {
  std::string name;
  std::filesystem::path project;
  std::filesystem::path inputs;
  std::filesystem::path golden_text;
  std::filesystem::path golden_json;
};

inline constexpr std::string_view kProjectSuffix = ".blockdsa.json";

inline std::vector<CorpusEntry> list_corpus(const std::filesystem::path& dir) {
  std::vector<CorpusEntry> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto file = entry.path().filename().string();
    if (file.size() <= kProjectSuffix.size() || !file.ends_with(kProjectSuffix)) continue;
    const auto name = file.substr(0, file.size() - kProjectSuffix.size());
    out.push_back({name, entry.path(), dir / (name + ".inputs.txt"), dir / (name + ".golden.txt"),
                   dir / (name + ".golden.json")});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

inline std::vector<std::string> corpus_inputs(const CorpusEntry& e) {
  auto text = read_file(e.inputs);
  return text ? split_lines(*text) : std::vector<std::string>{};
}

inline int cmd_corpus(const std::filesystem::path& dir, bool update, Streams io) {
  const auto entries = list_corpus(dir);
  if (entries.empty()) {
    io.err << "no reference programs in " << dir.string() << "\n";
    return exit_code::kInvalid;
  }
  int failures = 0;
  for (const auto& e : entries) {
    auto project = cli_detail::load_runnable(e.project.string(), io);
    if (!project) {
      io.out << "FAIL " << e.name << " (does not load)\n";
      ++failures;
      continue;
    }
    const auto result = run(*project, corpus_inputs(e));
    const auto text = render_text(result);
    const auto json = serialize_result(result);
    if (update) {
      std::ofstream(e.golden_text, std::ios::binary) << text;
      std::ofstream(e.golden_json, std::ios::binary) << json;
      io.out << "WROTE " << e.name << "\n";
      continue;
    }
    const auto want_text = read_file(e.golden_text);
    const auto want_json = read_file(e.golden_json);
    std::string problem;
    if (!want_text) problem = "missing " + e.golden_text.filename().string();
    else if (*want_text != text) problem = "text transcript differs";
    else if (want_json && *want_json != json) problem = "json result differs";
    if (problem.empty()) {
      io.out << "PASS " << e.name << "\n";
    } else {
      io.out << "FAIL " << e.name << " (" << problem << ")\n";
      ++failures;
    }
  }
  io.out << entries.size() - static_cast<std::size_t>(failures) << "/" << entries.size() << " reference programs match\n";
  return failures == 0 ? exit_code::kOk : exit_code::kInvalid;
}

#ifndef BLOCKDSA_CORPUS_DIR
#define BLOCKDSA_CORPUS_DIR "corpus"
#endif

/// Entry point shared by the blockdsa executable and the tests.
inline int run_cli(int argc, const char* const* argv, Streams io) {
  CLI::App app{"Block-based data structures runtime: validate, run, and inspect block programs", "blockdsa"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a project file and print diagnostics");
  validate->add_option("project", validate_path, "Path to a .blockdsa.json file")->required();

  RunConfig cfg;
  auto* run_cmd = app.add_subcommand("run", "Run a project headlessly");
  run_cmd->add_option("project", cfg.project_path, "Path to a .blockdsa.json file")->required();
  run_cmd->add_option("--inputs", cfg.inputs_file, "File with one answer per line for ask blocks");
  run_cmd->add_option("--input", cfg.inline_inputs, "One answer (repeatable; used after --inputs)");
  run_cmd->add_option("--seed", cfg.seed, "Seed for object ids")->capture_default_str();
  run_cmd->add_option("--step-budget", cfg.step_budget, "Maximum number of block executions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  run_cmd->add_flag("--interactive", cfg.interactive, "Prompt on stdin for each ask");

  bool markdown = false;
  auto* catalog = app.add_subcommand("catalog", "Print every block as JSON");
  catalog->add_flag("--markdown", markdown, "Print a human-readable block reference instead");

  std::string corpus_dir = BLOCKDSA_CORPUS_DIR;
  bool update = false;
  auto* corpus = app.add_subcommand("corpus", "Run the bundled reference programs against their golden transcripts");
  corpus->add_option("--dir", corpus_dir, "Directory holding the reference programs")->capture_default_str();
  corpus->add_flag("--update", update, "Rewrite the golden files instead of checking them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, io.out, io.err) == 0 ? exit_code::kOk : exit_code::kInvalid;
  }

  if (validate->parsed()) return cmd_validate(validate_path, io);
  if (run_cmd->parsed()) return cmd_run(cfg, io);
  if (catalog->parsed()) return cmd_catalog(markdown, io);
  return cmd_corpus(corpus_dir, update, io);
}

}  // namespace blockdsa
