#pragma once

// Experiment runner behind the command-line tool.
//
// Trial t at size n uses seed derive_seed(derive_seed(master_seed, n), t), so
// a trial's randomness does not depend on the other sizes or on the worker
// count. Rows are aggregated in (n, trial, statistic) order and rendered
// with fixed-precision numbers, so identical configs give identical bytes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rwtrack/stats.hpp"

namespace rwtrack {

inline const std::vector<std::string> kExperiments{"track",    "proj-tail", "drift",
                                                   "behrstock", "triangle", "gromov",
                                                   "dehn",     "decompose", "fit"};

struct ExperimentConfig {
  std::string experiment;
  std::string group = "Z^2*Z^2";
  std::vector<std::size_t> n_values{256};
  std::size_t trials = 10;
  std::uint64_t master_seed = 1;
  int R = 1;
  std::optional<double> C3;
  std::string out;  // empty: standard output
  std::string format = "csv";
  std::size_t workers = 1;
  std::string element;                       // decompose
  std::string input;                         // fit: a CSV written by an earlier run
  std::string statistic;                     // fit: restrict to one statistic
  std::vector<std::string> shapes;           // fit: shapes to compare (default set if empty)
};

/// Applies one key=value setting. Keys: experiment, group, n, trials, seed,
/// R, C3, out, format, workers, element, in, statistic, shapes. `n` takes a
/// comma list whose items are integers or powers written 2^k; an item
/// a..b of two powers of two expands to every power in between.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Reads key=value lines; blank lines and lines starting with '#' are skipped.
void apply_config_text(ExperimentConfig& config, const std::string& text);

std::vector<std::size_t> parse_n_values(const std::string& text);

/// Throws InvalidArgument / ParseError / UnsupportedFactor on a bad config
/// and HypothesisViolation when the group is not a non-trivial relatively
/// hyperbolic free product but the experiment needs one.
void validate_config(const ExperimentConfig& config);

/// Trial seed for size n and trial index t.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial);

struct ResultRow {
  std::string experiment;
  std::string group;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::string statistic;
  double lower = 0;
  double upper = 0;
  bool exact = true;
  std::uint64_t seed = 0;
};

struct MeanEntry {
  std::string statistic;
  std::size_t n = 0;
  Summary lower;
  Summary upper;
  double upper_max = 0;
  double exact_fraction = 0;
};

struct FitEntry {
  std::string statistic;  // fitted quantity, e.g. "hausdorff_transient" or "area/n"
  std::size_t rank = 0;   // position in model_compare, starting at 1
  FitResult fit;
};

struct TailEntry {
  std::string statistic;
  std::size_t n = 0;
  TailFit fit;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  std::vector<MeanEntry> means;
  std::vector<FitEntry> fits;
  std::vector<TailEntry> tails;
  std::vector<std::string> notes;  // fits or tails that could not be computed
  std::string text;                // decompose output
  bool partial = false;            // a resource guard stopped the run
};

/// Validates and runs. A ResourceError inside a trial stops the run: the
/// result keeps the rows of earlier sizes, clears every exact flag and sets
/// `partial`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Means, CIs and fits over a finished row set.
void summarize_rows(ExperimentResult& result);

std::string render_csv(const ExperimentResult& result);
std::string render_json(const ExperimentResult& result);
std::string render(const ExperimentResult& result);

/// Parses the data rows of render_csv output.
std::vector<ResultRow> parse_result_csv(const std::string& text);

/// Fixed-precision rendering: integral values print as integers, others with
/// six decimals.
std::string format_number(double value);

}  // namespace rwtrack
