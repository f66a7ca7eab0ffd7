// fuse <scenario-file> [--precision N] [--out FILE]
//
// Exit status: 0 on success, 1 on a scenario error, 2 on an I/O error.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fusion/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run a belief-fusion scenario and print its mass tables"};
  std::string scenario_path;
  std::string out_path;
  int precision = 3;
  app.add_option("scenario", scenario_path, "Scenario file")->required();
  app.add_option("--precision", precision, "Decimals per mass cell")
      ->check(CLI::Range(1, 12))
      ->capture_default_str();
  app.add_option("--out", out_path, "Write the tables to FILE instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string table;
  try {
    const auto scenario = fusion::load_scenario(scenario_path);
    table = fusion::render_table(fusion::run(scenario), precision);
  } catch (const fusion::IoError& e) {
    std::cerr << "0:0: " << e.what() << '\n';
    return 2;
  } catch (const fusion::ScenarioError& e) {
    std::cerr << e.line() << ':' << e.column() << ": " << e.what() << '\n';
    return 1;
  } catch (const fusion::Error& e) {
    std::cerr << "0:0: " << e.what() << '\n';
    return 1;
  }

  if (out_path.empty()) {
    std::cout << table;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!(out << table) || !out.flush()) {
    std::cerr << "0:0: cannot write '" << out_path << "'\n";
    return 2;
  }
  return 0;
}
