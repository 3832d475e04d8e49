#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "gcg/cli.hpp"

namespace {

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

}  // namespace

int main(int argc, char** argv) {
  using gcg::cli::Json;
  CLI::App app{"Exact checks for generalized complex geometry"};
  std::string input = "-";
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<int> cases, degree_bound;
  std::string samples;
  bool list = false;
  app.add_option("input", input, "job file, or - for stdin");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--cases", cases, "number of random cases");
  app.add_option("--degree-bound", degree_bound, "degree bound for witness searches");
  app.add_option("--samples", samples, "sample points: inline JSON or a file");
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--list-commands", list, "print the command names");
  app.set_version_flag("--version", gcg::cli::tool_version());
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (list) {
    for (const auto& c : gcg::cli::commands()) std::cout << c << "\n";
    return 0;
  }

  gcg::cli::Overrides ov;
  ov.seed = seed;
  ov.cases = cases;
  ov.degree_bound = degree_bound;
  gcg::cli::Report report;
  try {
    if (!samples.empty()) {
      std::string text = samples;
      std::ifstream f(samples);
      if (f) text = slurp(f);
      try {
        ov.samples = Json::parse(text);
      } catch (const Json::parse_error&) {
        throw gcg::cli::InputError("--samples", "not JSON and not a readable file");
      }
    }
    std::string text;
    if (input == "-") {
      text = slurp(std::cin);
    } else {
      std::ifstream f(input);
      if (!f) throw gcg::cli::InputError(input, "cannot open input file");
      text = slurp(f);
    }
    report = gcg::cli::run_text(text, ov);
  } catch (const gcg::cli::InputError& e) {
    report.verdict = "error";
    report.seed = seed.value_or(0);
    report.error = {{"message", e.what()}, {"location", e.location()}};
  }
  std::cout << gcg::cli::emit(report, format);
  return gcg::cli::exit_code(report);
}
