#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fraclab/error.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab::cli {

namespace {

constexpr double kVerifyTolerance = 1e-12;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

unsigned parse_threads(const std::string& text, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || v < 1 || v > 1024)
    throw ValidationError(std::string(what) + ": expected an integer in [1, 1024]");
  return static_cast<unsigned>(v);
}

int verify(const std::string& path, std::ostream& out) {
  const json report = load_json(path);
  if (!report.is_object() || !report.contains("command") || !report.contains("config") ||
      !report.contains("headline"))
    throw ValidationError(path + ": not a fraclab report");
  const std::string command = report.at("command").get<std::string>();
  const json& headline = report.at("headline");
  const CommandOutput fresh = run_command(command, report.at("config"));
  const json recorded = headline.at("value");
  const json recomputed = real(fresh.headline);

  bool agree;
  if (recorded.is_number() && recomputed.is_number()) {
    const double a = recorded.get<double>();
    const double b = recomputed.get<double>();
    agree = std::abs(a - b) <= kVerifyTolerance * std::max(1.0, std::abs(a));
  } else {
    agree = recorded == recomputed;
  }
  out << (agree ? "verified " : "MISMATCH ") << command << ' '
      << headline.at("name").get<std::string>() << ": recorded " << recorded.dump()
      << ", recomputed " << recomputed.dump() << '\n';
  return agree ? kSuccess : kNumeric;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-exponent fractional Sobolev norms, trace checks and energy solver",
               "fraclab"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  std::string out_dir;
  std::string threads;
  std::string verify_path;
  app.add_option("--out", out_dir, "Directory for the JSON report (and CSV for sweeps)");
  app.add_option("--threads", threads, "Worker threads (default: FRACLAB_THREADS or all cores)");
  app.add_option("--verify", verify_path, "Recompute the headline number of a report");

  std::string config_path;
  std::vector<CLI::App*> subs;
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, "Run '" + name + "' on a JSON config");
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "fraclab: " << e.what() << '\n';
    return kValidation;
  }

  try {
    if (!threads.empty()) {
      set_thread_count(parse_threads(threads, "--threads"));
    } else if (const char* env = std::getenv("FRACLAB_THREADS"); env && *env) {
      set_thread_count(parse_threads(env, "FRACLAB_THREADS"));
    }

    const auto chosen = std::find_if(subs.begin(), subs.end(),
                                     [](const CLI::App* s) { return s->parsed(); });
    if (!verify_path.empty()) {
      if (chosen != subs.end()) throw ValidationError("--verify takes no subcommand");
      return verify(verify_path, out);
    }
    if (chosen == subs.end()) {
      err << "fraclab: a subcommand or --verify is required\n" << app.help();
      return kValidation;
    }

    const std::string name = (*chosen)->get_name();
    const json config = load_json(config_path);
    const CommandOutput result = run_command(name, config);
    const std::string text = make_report(name, config, result).dump(2) + "\n";
    out << text;
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / (name + ".json"), text);
      if (result.csv) write_file(std::filesystem::path(out_dir) / (name + ".csv"), *result.csv);
    }
    if (result.exit_code == kNonconvergence) err << "fraclab: " << name << " did not converge\n";
    return result.exit_code;
  } catch (const NumericError& e) {
    err << "fraclab: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const ValidationError& e) {
    err << "fraclab: " << e.what() << '\n';
    return kValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "fraclab: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace fraclab::cli
