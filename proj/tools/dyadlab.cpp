// Command-line runner. Everything goes through the C API; nlohmann/json is only used to
// read the config file and to pick summary lines out of the returned report.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadlab/dyadlab.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitHardFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  bool clamp = false;
  bool quiet = false;
};

std::vector<std::string> subcommands() {
  std::vector<std::string> out;
  std::istringstream is(dl_subcommands());
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

// Owns a string returned by the C API.
struct CString {
  char* p = nullptr;
  ~CString() { dl_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

int run_command(const std::string& name, const Options& opt) {
  nlohmann::json config = nlohmann::json::object();
  if (!opt.config_path.empty()) {
    std::ifstream is(opt.config_path);
    if (!is) {
      std::cerr << "error: cannot read config " << opt.config_path << "\n";
      return kExitUsage;
    }
    try {
      config = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: config " << opt.config_path << ": " << e.what() << "\n";
      return kExitUsage;
    }
    if (!config.is_object()) {
      std::cerr << "error: config: expected a JSON object\n";
      return kExitUsage;
    }
  }
  if (opt.clamp) {
    if (!config.contains(name) || config[name].is_null()) config[name] = nlohmann::json::object();
    if (config[name].is_object()) config[name]["clamp"] = true;
  }

  CString report, records, table;
  int hard = 0;
  const dl_status st = dl_run(name.c_str(), config.dump().c_str(), opt.seed.value_or(0), opt.seed.has_value(),
                              &report.p, &records.p, &table.p, &hard);
  if (st != DL_OK) {
    std::cerr << "error: " << dl_last_error() << "\n";
    return st == DL_PARSE || st == DL_INVALID_ARGUMENT ? kExitUsage : kExitHardFailure;
  }

  const auto rep = nlohmann::json::parse(report.str());
  fs::path dir = opt.out;
  if (dir.empty() && config.contains("output") && config["output"].is_string())
    dir = config["output"].get<std::string>();
  if (dir.empty()) {
    const char* env = std::getenv("DYADLAB_OUT");
    dir = env && *env ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<fs::path> written;
  bool ok = true;
  if (opt.format == "json") {
    written.push_back(dir / (name + ".json"));
    ok = write_file(written.back(), report.str() + "\n");
  } else {
    written.push_back(dir / (name + ".csv"));
    ok = write_file(written.back(), records.str());
    if (ok && !table.str().empty()) {
      written.push_back(dir / (name + "-table.csv"));
      ok = write_file(written.back(), table.str());
    }
  }
  if (!ok) {
    std::cerr << "error: cannot write reports to " << dir.string() << "\n";
    return kExitUsage;
  }

  if (!opt.quiet) {
    for (const auto& line : rep["summary"]) std::cout << line.get<std::string>() << "\n";
    for (const auto& r : rep["records"])
      if (r["verdict"] == "FAIL" || r["verdict"] == "WARN")
        std::cout << r["verdict"].get<std::string>() << " " << r["check"].get<std::string>() << " "
                  << r["instance"].get<std::string>() << " value=" << r["value"].dump() << "\n";
    std::cout << "hard failures: " << rep["hard_failures"].get<int>() << ", warnings: " << rep["warnings"].get<int>()
              << "\n";
    for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
  }
  return hard > 0 ? kExitHardFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for dyadic model operators, matrix-valued forms and fractional Leibniz ratios"};
  app.set_version_flag("--version", std::string(dl_version()));
  app.require_subcommand(1);

  Options opt;
  std::string chosen;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " checks");
    sub->add_option("--config", opt.config_path, "JSON config with global fields and a block named after the command")
        ->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>(
        "--seed", [&opt](const std::uint64_t& s) { opt.seed = s; }, "override the config seed");
    sub->add_option("--out", opt.out, "output directory (default: config output, then $DYADLAB_OUT, then .)");
    sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--quiet", opt.quiet, "do not print summaries");
    if (name == "shift-eval" || name == "reduce-verify")
      sub->add_flag("--clamp", opt.clamp, "project out-of-bound shift coefficients onto the bound");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  return run_command(chosen, opt);
}
