#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jobs.hpp"

using obstrukt::cli::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw obstrukt::cli::SchemaError("cannot open " + path);
  return json::parse(in);
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw obstrukt::cli::SchemaError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characteristic classes of split extensions"};
  app.require_subcommand(1);

  std::string job_path, out_path, report_path, filter;
  bool inject = false, no_timestamp = false;
  int t = 0, r = 2, max_degree = 5;

  auto* run = app.add_subcommand("run", "Run a job file and print its JSON report");
  run->add_option("job", job_path, "job JSON")->required();
  run->add_option("-o,--out", out_path, "report path (default stdout)");
  run->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");

  auto* corpus = app.add_subcommand("corpus", "Check the built-in corpus and print a pass/fail table");
  corpus->add_option("--filter", filter, "substring of entry names");
  corpus->add_option("--out", out_path, "write the JSON report here");
  corpus->add_option("--max-degree", max_degree, "truncation for group entries")->check(CLI::Range(3, 8));
  corpus->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
  corpus->add_flag("--inject-sign-error", inject)->group("");

  auto* explain = app.add_subcommand("explain", "Render the computation of v_r^t from a report");
  explain->add_option("report", report_path, "report JSON")->required();
  explain->add_option("--t", t)->required();
  explain->add_option("--r", r)->required();

  auto* bounds = app.add_subcommand("bounds", "Print B_r^t and its prime factors");
  bounds->add_option("--r", r)->required();
  bounds->add_option("--t", t)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      write_out(obstrukt::cli::dump(obstrukt::cli::run_job(read_json(job_path)), no_timestamp), out_path);
    } else if (*corpus) {
      obstrukt::cli::CorpusOptions opt;
      opt.filter = filter;
      opt.inject_sign_error = inject;
      opt.max_degree = max_degree;
      if (max_degree > obstrukt::cli::degree_ceiling())
        throw obstrukt::cli::DegreeCeiling("max_degree exceeds the ceiling " +
                                           std::to_string(obstrukt::cli::degree_ceiling()));
      auto res = obstrukt::cli::run_corpus(opt);
      obstrukt::cli::print_corpus_table(res, std::cout);
      if (!out_path.empty()) write_out(obstrukt::cli::dump(res.report, no_timestamp), out_path);
      return res.ok() ? 0 : 1;
    } else if (*explain) {
      std::cout << obstrukt::cli::explain(read_json(report_path), t, r);
    } else if (*bounds) {
      if (t < r) throw obstrukt::cli::SchemaError("bounds need t >= r");
      std::cout << obstrukt::cli::dump(obstrukt::cli::bounds_report(r, t));
    }
  } catch (const std::exception& e) {
    std::string msg;
    const int code = obstrukt::cli::exit_code_for(e, msg);
    std::cerr << "obstrukt: " << msg << "\n";
    return code;
  }
  return 0;
}
