// Command-line front end for the experiment runner.
//
// Exit codes: 0 success, 2 config error, 3 hypothesis violation, 4 resource
// guard (partial output is still written).

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rwtrack/errors.hpp"
#include "rwtrack/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kHypothesis = 3;
constexpr int kResource = 4;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--group", "group", "group spec, e.g. Z^2*Z^2"},
    {"--n", "n", "walk lengths: 256,512 or 2^7..2^13"},
    {"--trials", "trials", "trials per n"},
    {"--seed", "seed", "master seed"},
    {"--R", "R", "transient depth"},
    {"--C3", "C3", "progress constant for subwalk violations (drift)"},
    {"--out", "out", "output file (default: standard output)"},
    {"--format", "format", "csv or json"},
    {"--workers", "workers", "worker threads"},
    {"--element", "element", "element word for decompose, e.g. 'a1^5 b2 a1^3 a2^3'"},
    {"--in", "in", "input CSV for fit"},
    {"--statistic", "statistic", "statistic to fit (fit)"},
    {"--shapes", "shapes", "shapes to compare: log,log_squared,sqrt_nlog,power,linear"},
};

int write_output(const rwtrack::ExperimentConfig& config, const std::string& text) {
  if (config.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << config.out << "'\n";
    return kConfigError;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walk tracking experiments on free products"};
  app.require_subcommand(1);

  std::map<std::string, std::string> values;
  std::string config_file;
  std::map<std::string, CLI::Option*> options;
  for (const auto& name : rwtrack::kExperiments) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_file, "key=value config file (flags override it)");
    for (const auto& f : kFlags) {
      auto* opt = sub->add_option(f.name, values[std::string(name) + ":" + f.key], f.help);
      options[std::string(name) + ":" + f.key] = opt;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string experiment = sub->get_name();
  rwtrack::ExperimentConfig config;
  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file, std::ios::binary);
      if (!in) throw rwtrack::InvalidArgument("cannot read config file '" + config_file + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      rwtrack::apply_config_text(config, buf.str());
    }
    for (const auto& f : kFlags) {
      const auto key = experiment + ":" + f.key;
      if (options[key]->count() > 0) rwtrack::apply_setting(config, f.key, values[key]);
    }
    config.experiment = experiment;
    auto result = rwtrack::run_experiment(config);
    const int written = write_output(result.config, rwtrack::render(result));
    if (written != 0) return written;
    if (result.partial) {
      for (const auto& note : result.notes) std::cerr << "resource guard: " << note << "\n";
      return kResource;
    }
    return 0;
  } catch (const rwtrack::HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return kHypothesis;
  } catch (const rwtrack::ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kResource;
  } catch (const rwtrack::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}
