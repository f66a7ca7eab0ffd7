// Scenario files: a line-oriented description of a frame, its sources, what
// is known about their conflicts, and the fusion commands to run.
//
//   # comment
//   frame A B C D
//   mode superpower|hyperpower|power
//   constraint empty <expr>
//   constraint subset <expr> <expr>
//   constraint equal <expr> <expr>
//   world closed|open
//   source <name>
//   mass <name> <expr> <value>
//   imass <name> <expr> <lo>..<hi>[,<lo>..<hi>...]
//   case <expr> keep|pcr5|union|pessimistic|right <expr>|ignorance|empty|others|pcr5-nonempty
//   discount <name> <alpha> [as <name>]
//   normalize <name> [as <name>]
//   classify <name>
//   fuse <rule> <name> <name>... [as <name>]
//   bounds <name> <name>
//   uft <name> <name>... [as <name>]
//   dynamic <decay> <name>... [-> <renderer>]
//
// Expressions contain no whitespace. Source masses are read on the free
// model; constraints take effect when conflicts are transferred.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fusion/algebra.hpp"
#include "fusion/dynamic.hpp"
#include "fusion/mass.hpp"
#include "fusion/uft.hpp"

namespace fusion {

/// Scenario syntax or semantic error; line and column are 1-based.
class ScenarioError : public Error {
 public:
  ScenarioError(std::size_t line, std::size_t column, const std::string& what)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The scenario file could not be read.
class IoError : public Error {
 public:
  using Error::Error;
};

struct Token {
  std::string text;
  std::size_t column = 0;  // 1-based
};

struct Source {
  std::string name;
  std::size_t line = 0;
  std::optional<Bba> crisp;
  std::optional<ImpreciseBba> imprecise;
};

struct Command {
  std::size_t line = 0;
  std::string text;           // the source line, trimmed
  std::vector<Token> tokens;  // tokens[0] is the command word
  World world = World::Closed;
  RelationshipSpec spec;      // case directives in effect at this line
};

struct Scenario {
  FramePtr model;
  std::vector<Source> sources;  // declaration order, including results named with `as`
  std::vector<Command> commands;

  const Source* find_source(std::string_view name) const;
};

Scenario parse_scenario(std::string_view text);
/// Throws IoError when the file cannot be read, ScenarioError otherwise.
Scenario load_scenario(const std::filesystem::path& path);

struct Row {
  std::string label;
  std::optional<Bba> masses;
  std::string text;  // used when `masses` is empty
};

struct Block {
  std::size_t line = 0;
  std::string command;
  std::vector<Row> rows;
};

struct Report {
  std::vector<Block> blocks;
};

/// Executes the commands in order. Library errors are rethrown as
/// ScenarioError tagged with the command's line.
Report run(const Scenario& scenario);

/// Tab-separated tables, one per command. Mass cells are rounded to
/// `precision` decimals (1..12); a trailing `sum` column is printed at full
/// precision.
std::string render_table(const Report& report, int precision = 3);

}  // namespace fusion
