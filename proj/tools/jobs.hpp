#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace obstrukt::cli {

using nlohmann::json;

// Exit status 2.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Exit status 2: the report has no entry for the requested (t, r).
class MissingEntry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Exit status 4.
class DegreeCeiling : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultDegreeCeiling = 6;
// OBSTRUKT_MAX_DEGREE if set, else the default.
int degree_ceiling();

// Maps an in-flight exception to the documented exit status and a message
// naming the violated hypothesis.
int exit_code_for(const std::exception& e, std::string& message);

// Runs one job document. The result carries a "timestamp" field; every
// other byte depends only on the input.
json run_job(const json& job);

struct CorpusOptions {
  std::string filter;  // substring of the entry name; empty selects all
  bool inject_sign_error = false;
  int max_degree = 5;
};
struct PropertyResult {
  std::string entry, property;
  bool pass;
  std::string detail;
};
struct CorpusResult {
  std::vector<PropertyResult> results;
  json report;
  bool ok() const;
};
CorpusResult run_corpus(const CorpusOptions& opt);
void print_corpus_table(const CorpusResult& res, std::ostream& os);

// Text rendering of one charclass entry of a report. Throws MissingEntry.
std::string explain(const json& report, int t, int r);

json bounds_report(int r, int t);

// Deterministic serialization; drop_timestamp removes the volatile field.
std::string dump(const json& report, bool drop_timestamp = false);
std::string timestamp_now();

}  // namespace obstrukt::cli
