#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcg/pullback.hpp"

namespace gcg::cli {

using Json = nlohmann::json;

inline constexpr const char* kJobSchema = "gcg-job/1";
inline constexpr const char* kReportSchema = "gcg-report/1";

std::string tool_version();
const std::vector<std::string>& commands();

// Malformed or schema-invalid input; location is a JSON pointer (or a
// "byte N" offset for syntax errors).
class InputError : public Error {
 public:
  InputError(std::string location, const std::string& msg)
      : Error(location.empty() ? msg : location + ": " + msg), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

struct JobOptions {
  std::uint64_t seed = 0;
  int cases = 100;
  std::optional<int> degree_bound;
  // Raw sample specification, decoded against whichever chart a command
  // samples on: an array of points, or {"grid": {"values": [...], "over": "real"|"complex"}}.
  std::optional<Json> samples;
};

std::vector<Point> decode_samples(const Chart& c, const Json& j, const std::string& path);

struct Job {
  std::string command;
  Chart chart;
  Json input;
  JobOptions options;
};

// Flag values override the document's options.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> cases;
  std::optional<int> degree_bound;
  std::optional<Json> samples;
};

Job parse_job(const Json& doc, const Overrides& overrides = {});
Job parse_job_text(const std::string& text, const Overrides& overrides = {});

struct Report {
  std::string command;
  std::string verdict;  // pass | fail | error
  Json certificate;     // present for pass
  Json counterexample;  // present for fail
  Json error;           // present for error: {message, location}
  std::uint64_t seed = 0;
  double timing_ms = 0;
};

Report run(const Job& job);
// Parses and runs; input errors become an error report.
Report run_text(const std::string& text, const Overrides& overrides = {});

Json to_json(const Report& r);
Report report_from_json(const Json& j);
std::string emit(const Report& r, const std::string& format);
int exit_code(const Report& r);

// Codecs between chart-relative JSON and library values.
Chart decode_chart(const Json& j, const std::string& path = "/chart");
Json encode_chart(const Chart& c);
Poly decode_scalar(const Chart& c, const Json& j, const std::string& path);
Json encode_scalar(const Chart& c, const Poly& p);
PVector decode_vector(const Chart& c, const Json& j, const std::string& path, int size);
Json encode_vector(const Chart& c, const PVector& v);
PMatrix decode_matrix(const Chart& c, const Json& j, const std::string& path, int rows, int cols);
Json encode_matrix(const Chart& c, const PMatrix& m);
PForm decode_form(const Chart& c, const Json& j, const std::string& path, Variance v = Variance::form);
Json encode_form(const Chart& c, const PForm& f);
PSection decode_section(const Chart& c, const Json& j, const std::string& path);
Json encode_section(const Chart& c, const PSection& s);
Point decode_point(const Chart& c, const Json& j, const std::string& path);
Json encode_point(const Point& p);

}  // namespace gcg::cli
