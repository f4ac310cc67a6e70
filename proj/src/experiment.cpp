#include "rwtrack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rwtrack/dehn.hpp"
#include "rwtrack/errors.hpp"
#include "rwtrack/geometry.hpp"
#include "rwtrack/group.hpp"
#include "rwtrack/parallel.hpp"
#include "rwtrack/projections.hpp"
#include "rwtrack/walk.hpp"

namespace rwtrack {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw InvalidArgument(key + " must be a nonnegative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw InvalidArgument(key + " is out of range: '" + text + "'");
  }
}

std::size_t parse_size_item(const std::string& item) {
  const auto caret = item.find('^');
  if (caret == std::string::npos) return parse_unsigned("n", item);
  const auto base = parse_unsigned("n", item.substr(0, caret));
  const auto exp = parse_unsigned("n", item.substr(caret + 1));
  if (base < 2 || exp > 40) throw InvalidArgument("n item '" + item + "' is out of range");
  std::size_t v = 1;
  for (std::uint64_t i = 0; i < exp; ++i) v *= base;
  return v;
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

bool needs_rh(const std::string& experiment) {
  return experiment == "track" || experiment == "proj-tail" || experiment == "triangle" ||
         experiment == "gromov" || experiment == "dehn";
}

std::vector<std::string> fitted_statistics(const std::string& experiment) {
  if (experiment == "track") return {"hausdorff_transient"};
  if (experiment == "proj-tail") return {"max_projection"};
  if (experiment == "triangle") return {"thinness"};
  if (experiment == "gromov") return {"gromov_offset"};
  if (experiment == "dehn") return {"area"};
  return {};
}

ResultRow make_row(const ExperimentConfig& c, std::size_t n, std::size_t trial,
                   const std::string& statistic, double lower, double upper, bool exact,
                   std::uint64_t seed) {
  return {c.experiment, c.group, n, trial, statistic, lower, upper, exact, seed};
}

ResultRow bound_row(const ExperimentConfig& c, std::size_t n, std::size_t trial,
                    const std::string& statistic, const BoundPair& b, std::uint64_t seed) {
  return make_row(c, n, trial, statistic, static_cast<double>(b.lower),
                  static_cast<double>(b.upper), b.exact, seed);
}

/// Rows of one trial.
std::vector<ResultRow> run_trial(const ExperimentConfig& c, const Group& group,
                                 const StepMeasure& measure, std::size_t n, std::size_t trial) {
  const auto seed = trial_seed(c.master_seed, n, trial);
  const TransientParams params{c.R};
  std::vector<ResultRow> rows;
  auto endpoint = [&](std::uint64_t k) {
    return sample_trajectory(group, measure, n, derive_seed(seed, k), StorageMode::Streaming)
        .endpoint();
  };
  if (c.experiment == "track") {
    auto walk = sample_trajectory(group, measure, n, seed, StorageMode::Full);
    rows.push_back(bound_row(c, n, trial, "hausdorff_transient",
                             hausdorff_tracking(group, walk, params, TrackingTarget::Transient),
                             seed));
    auto close = transient_log_closeness(group, walk, params);
    rows.push_back(make_row(c, n, trial, "log_closeness", close.ratio, close.ratio, true, seed));
  } else if (c.experiment == "proj-tail") {
    auto walk = sample_trajectory(group, measure, n, seed, StorageMode::Streaming);
    const auto v = static_cast<double>(projection_tail_sample(group, walk));
    rows.push_back(make_row(c, n, trial, "max_projection", v, v, true, seed));
  } else if (c.experiment == "drift") {
    const bool full = c.C3.has_value();
    auto walk = sample_trajectory(group, measure, n, seed,
                                  full ? StorageMode::Full : StorageMode::Streaming);
    const double d = static_cast<double>(group.word_length(walk.endpoint())) /
                     static_cast<double>(n);
    rows.push_back(make_row(c, n, trial, "drift", d, d, true, seed));
    if (full) {
      const double v = has_progress_violation(group, walk, *c.C3) ? 1.0 : 0.0;
      rows.push_back(make_row(c, n, trial, "violation", v, v, true, seed));
    }
  } else if (c.experiment == "behrstock") {
    const auto x = endpoint(0), y = endpoint(1), z = endpoint(2);
    const auto k = group.factor_count();
    const auto fp = static_cast<std::uint32_t>(splitmix64(seed) % k);
    const auto fq = static_cast<std::uint32_t>(splitmix64(seed + 1) % k);
    const auto p = PeripheralCoset::through(y, fp);
    auto q = PeripheralCoset::through(z, fq);
    if (q == p) q = PeripheralCoset::through(z, static_cast<std::uint32_t>((fq + 1) % k));
    if (q == p) throw InvalidArgument("behrstock needs a group with at least two factors");
    const auto v = static_cast<double>(behrstock_min(group, x, p, q));
    rows.push_back(make_row(c, n, trial, "behrstock_min", v, v, true, seed));
  } else if (c.experiment == "triangle") {
    rows.push_back(bound_row(c, n, trial, "thinness",
                             triangle_thinness(group, endpoint(0), endpoint(1), endpoint(2)),
                             seed));
  } else if (c.experiment == "gromov") {
    rows.push_back(
        bound_row(c, n, trial, "gromov_offset", gromov_offset(group, endpoint(0), endpoint(1)),
                  seed));
  } else if (c.experiment == "dehn") {
    auto walk = sample_trajectory(group, measure, n, seed, StorageMode::Streaming);
    const auto r = loop_area(group, loop_of_trajectory(group, walk));
    rows.push_back(make_row(c, n, trial, "area", static_cast<double>(r.lower),
                            static_cast<double>(r.upper), r.exact, seed));
  }
  return rows;
}

std::string decompose_text(const ExperimentConfig& c, const Group& group) {
  const auto x = group.normalize(group.parse_word(c.element));
  std::string out = "element " + group.render(x) + "\n";
  for (std::size_t j = 0; j < x.syllables.size(); ++j) {
    const auto& s = x.syllables[j];
    const GroupElement single{{s}};
    out += "syllable " + std::to_string(j) + " " + group.factor_name(s.factor) + " " +
           group.render(single) + " length " + std::to_string(group.word_length(single)) + "\n";
  }
  const auto path = group.canonical_geodesic({}, x);
  out += render_decomposition(group, transient_decomposition(group, path, {c.R}));
  return out;
}

std::vector<Shape> default_shapes() {
  return {Shape::Log, Shape::SqrtNLog, Shape::Power, Shape::Linear};
}

void add_fits(ExperimentResult& result, const std::string& name,
              const std::vector<FitPoint>& points, const std::vector<Shape>& requested) {
  std::set<double> distinct;
  bool positive = true;
  for (const auto& p : points) {
    distinct.insert(p.n);
    positive = positive && p.y > 0;
  }
  if (distinct.size() < 3) {
    result.notes.push_back(name + ": fewer than 3 sizes, no fit");
    return;
  }
  std::vector<Shape> shapes;
  for (auto s : requested) {
    if (s == Shape::Power && !positive) {
      result.notes.push_back(name + ": power fit skipped, a mean is zero");
      continue;
    }
    shapes.push_back(s);
  }
  try {
    const auto ranked = model_compare(points, shapes);
    for (std::size_t i = 0; i < ranked.size(); ++i) result.fits.push_back({name, i + 1, ranked[i]});
  } catch (const Error& e) {
    result.notes.push_back(name + ": " + e.what());
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::pair<std::string, std::string>> echoed_config(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("experiment", c.experiment);
  const bool sampled = c.experiment != "decompose" && c.experiment != "fit";
  if (c.experiment != "fit") out.emplace_back("group", c.group);
  if (sampled) {
    std::string ns;
    for (auto n : c.n_values) ns += (ns.empty() ? "" : ",") + std::to_string(n);
    out.emplace_back("n", ns);
    out.emplace_back("trials", std::to_string(c.trials));
    out.emplace_back("seed", std::to_string(c.master_seed));
  }
  if (c.experiment != "fit") out.emplace_back("R", std::to_string(c.R));
  if (c.C3) out.emplace_back("C3", format_number(*c.C3));
  if (!c.element.empty()) out.emplace_back("element", c.element);
  if (!c.input.empty()) out.emplace_back("in", c.input);
  if (!c.statistic.empty()) out.emplace_back("statistic", c.statistic);
  if (!c.shapes.empty()) {
    std::string s;
    for (const auto& x : c.shapes) s += (s.empty() ? "" : ",") + x;
    out.emplace_back("shapes", s);
  }
  out.emplace_back("presentation", "Z^2 <a1,a2|[a1,a2]>; Z/m <t|t^m>; F_r and Z^1 free");
  return out;
}

nlohmann::json number(double v) { return nlohmann::json::parse(format_number(v)); }

}  // namespace

std::string format_number(double value) {
  char buf[64];
  if (std::isfinite(value) && value == std::floor(value) && std::abs(value) < 1e15) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(value));
  } else {
    std::snprintf(buf, sizeof buf, "%.6f", value);
    if (std::string(buf) == "-0.000000") return "0.000000";
  }
  return buf;
}

std::vector<std::size_t> parse_n_values(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw InvalidArgument("empty item in n list '" + text + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_size_item(item));
      continue;
    }
    const auto lo = parse_size_item(trim(item.substr(0, dots)));
    const auto hi = parse_size_item(trim(item.substr(dots + 2)));
    if (!is_power_of_two(lo) || !is_power_of_two(hi) || lo > hi) {
      throw InvalidArgument("range '" + item + "' must join two ascending powers of two");
    }
    for (auto v = lo; v <= hi; v *= 2) out.push_back(v);
  }
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const auto key = trim(raw_key);
  const auto value = trim(raw_value);
  if (key == "experiment") {
    c.experiment = value;
  } else if (key == "group") {
    c.group = value;
  } else if (key == "n") {
    c.n_values = parse_n_values(value);
  } else if (key == "trials") {
    c.trials = parse_unsigned(key, value);
  } else if (key == "seed") {
    c.master_seed = parse_unsigned(key, value);
  } else if (key == "R") {
    const auto r = parse_unsigned(key, value);
    if (r > 1000000) throw InvalidArgument("R is out of range");
    c.R = static_cast<int>(r);
  } else if (key == "C3") {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || !(v > 0) || !std::isfinite(v)) {
      throw InvalidArgument("C3 must be a positive number, got '" + value + "'");
    }
    c.C3 = v;
  } else if (key == "out") {
    c.out = value;
  } else if (key == "format") {
    c.format = value;
  } else if (key == "workers") {
    c.workers = parse_unsigned(key, value);
  } else if (key == "element") {
    c.element = value;
  } else if (key == "in") {
    c.input = value;
  } else if (key == "statistic") {
    c.statistic = value;
  } else if (key == "shapes") {
    c.shapes.clear();
    for (const auto& s : split(value, ',')) c.shapes.push_back(s);
  } else {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(number) + " is not key=value");
    }
    apply_setting(config, t.substr(0, eq), t.substr(eq + 1));
  }
}

void validate_config(const ExperimentConfig& c) {
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) == kExperiments.end()) {
    throw InvalidArgument("unknown experiment '" + c.experiment + "'");
  }
  if (c.format != "csv" && c.format != "json") {
    throw InvalidArgument("format must be csv or json");
  }
  if (c.workers < 1) throw InvalidArgument("workers must be at least 1");
  for (const auto& s : c.shapes) parse_shape(s);
  if (c.experiment == "fit") {
    if (c.input.empty()) throw InvalidArgument("fit needs an input file (in=...)");
    return;
  }
  const GroupSpec spec = parse_group_spec(c.group);
  const Group group(spec);
  if (c.experiment == "decompose") {
    if (c.element.empty()) throw InvalidArgument("decompose needs an element");
    group.parse_word(c.element);
    return;
  }
  if (c.n_values.empty()) throw InvalidArgument("n needs at least one value");
  for (std::size_t i = 0; i < c.n_values.size(); ++i) {
    if (c.n_values[i] < 2) throw InvalidArgument("every n must be at least 2");
    if (i > 0 && c.n_values[i] <= c.n_values[i - 1]) {
      throw InvalidArgument("n values must be strictly ascending");
    }
  }
  if (c.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (needs_rh(c.experiment)) {
    const auto why = spec.nontrivial_rh_violation();
    if (!why.empty()) {
      throw HypothesisViolation("experiment " + c.experiment + " needs a non-trivial relatively " +
                                "hyperbolic group: " + why);
    }
  }
  if (c.experiment == "dehn") require_area_oracles(group);
  if (c.experiment == "behrstock" && group.factor_count() < 2) {
    throw InvalidArgument("behrstock needs at least two factors");
  }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial) {
  return derive_seed(derive_seed(master_seed, n), trial);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentResult result;
  result.config = config;
  if (config.experiment == "fit") {
    std::ifstream in(config.input, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + config.input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    SampleTable table;
    for (auto& row : parse_result_csv(buf.str())) {
      if (config.statistic.empty() || row.statistic == config.statistic) {
        table.add(row.n, row.trial, row.statistic, row.upper);
        result.rows.push_back(std::move(row));
      }
    }
    if (result.rows.empty()) throw InvalidArgument("no matching rows in '" + config.input + "'");
    summarize_rows(result);
    result.rows.clear();
    return result;
  }
  const Group group(parse_group_spec(config.group));
  if (config.experiment == "decompose") {
    result.text = decompose_text(config, group);
    return result;
  }
  const auto measure = simple_measure(group);
  for (auto n : config.n_values) {
    std::vector<std::vector<ResultRow>> slots(config.trials);
    try {
      parallel_for(config.trials, config.workers, [&](std::size_t t) {
        slots[t] = run_trial(config, group, measure, n, t);
      });
    } catch (const ResourceError& e) {
      result.partial = true;
      result.notes.push_back("stopped at n = " + std::to_string(n) + ": " + e.what());
      for (auto& row : result.rows) row.exact = false;
      break;
    }
    for (auto& s : slots) {
      for (auto& row : s) result.rows.push_back(std::move(row));
    }
  }
  summarize_rows(result);
  return result;
}

void summarize_rows(ExperimentResult& result) {
  std::map<std::pair<std::string, std::size_t>, std::vector<const ResultRow*>> groups;
  for (const auto& row : result.rows) groups[{row.statistic, row.n}].push_back(&row);
  result.means.clear();
  for (const auto& [key, rows] : groups) {
    std::vector<double> lo, hi;
    std::size_t exact = 0;
    for (const auto* r : rows) {
      lo.push_back(r->lower);
      hi.push_back(r->upper);
      exact += r->exact;
    }
    MeanEntry m;
    m.statistic = key.first;
    m.n = key.second;
    m.lower = summarize(lo);
    m.upper = summarize(hi);
    m.upper_max = *std::max_element(hi.begin(), hi.end());
    m.exact_fraction = static_cast<double>(exact) / static_cast<double>(rows.size());
    result.means.push_back(m);
  }

  const auto& c = result.config;
  std::vector<std::string> names;
  if (c.experiment == "fit") {
    std::set<std::string> seen;
    for (const auto& m : result.means) seen.insert(m.statistic);
    names.assign(seen.begin(), seen.end());
  } else {
    names = fitted_statistics(c.experiment);
  }
  std::vector<Shape> shapes;
  for (const auto& s : c.shapes) shapes.push_back(parse_shape(s));
  if (shapes.empty()) shapes = default_shapes();

  result.fits.clear();
  result.tails.clear();
  for (const auto& name : names) {
    std::vector<FitPoint> points;
    for (const auto& m : result.means) {
      if (m.statistic == name) points.push_back({static_cast<double>(m.n), m.upper.mean});
    }
    if (points.empty()) continue;
    add_fits(result, name, points, shapes);
    if (name == "area") {
      auto per_n = points;
      for (auto& p : per_n) p.y /= p.n;
      add_fits(result, "area/n", per_n,
               c.shapes.empty() ? std::vector<Shape>{Shape::LogSquared, Shape::Log, Shape::Linear}
                                : shapes);
    }
  }
  if (c.experiment == "proj-tail") {
    for (const auto& [key, rows] : groups) {
      if (key.first != "max_projection") continue;
      std::vector<double> v;
      for (const auto* r : rows) v.push_back(r->upper);
      try {
        result.tails.push_back({key.first, key.second, tail_fit_exponential(v)});
      } catch (const Error& e) {
        result.notes.push_back("tail at n = " + std::to_string(key.second) + ": " + e.what());
      }
    }
  }
}

std::string render_csv(const ExperimentResult& r) {
  std::string out = "# rwtrack results\n";
  for (const auto& [k, v] : echoed_config(r.config)) out += "# " + k + "=" + v + "\n";
  if (r.partial) out += "# partial=1\n";
  if (!r.text.empty()) return out + r.text;
  out += "experiment,group,n,trial,statistic,lower,upper,exact,seed\n";
  for (const auto& row : r.rows) {
    out += row.experiment + "," + row.group + "," + std::to_string(row.n) + "," +
           std::to_string(row.trial) + "," + row.statistic + "," + format_number(row.lower) + "," +
           format_number(row.upper) + "," + (row.exact ? "1" : "0") + "," +
           std::to_string(row.seed) + "\n";
  }
  out += "# summary\nkind,statistic,n,key,value\n";
  for (const auto& m : r.means) {
    const auto prefix = "mean," + m.statistic + "," + std::to_string(m.n) + ",";
    const std::pair<const char*, double> fields[] = {
        {"count", static_cast<double>(m.upper.count)},
        {"lower_mean", m.lower.mean},
        {"upper_mean", m.upper.mean},
        {"upper_ci_low", m.upper.ci_low},
        {"upper_ci_high", m.upper.ci_high},
        {"upper_max", m.upper_max},
        {"exact_fraction", m.exact_fraction}};
    for (const auto& [k, v] : fields) out += prefix + k + "," + format_number(v) + "\n";
  }
  for (const auto& f : r.fits) {
    const auto prefix = "fit," + f.statistic + ",," + shape_name(f.fit.shape) + ".";
    out += prefix + "rank," + std::to_string(f.rank) + "\n";
    out += prefix + "coefficient," + format_number(f.fit.coefficient) + "\n";
    if (f.fit.shape == Shape::Power) out += prefix + "exponent," + format_number(f.fit.exponent) + "\n";
    out += prefix + "r_squared," + format_number(f.fit.r_squared) + "\n";
  }
  for (const auto& t : r.tails) {
    const auto prefix = "tail," + t.statistic + "," + std::to_string(t.n) + ",exponential.";
    out += prefix + "rate," + format_number(t.fit.rate_or_exponent) + "\n";
    out += prefix + "r_squared," + format_number(t.fit.r_squared) + "\n";
    out += prefix + "points," + std::to_string(t.fit.points_used) + "\n";
  }
  for (const auto& note : r.notes) out += "note,,,," + csv_escape(note) + "\n";
  return out;
}

std::string render_json(const ExperimentResult& r) {
  nlohmann::ordered_json doc;
  auto& cfg = doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : echoed_config(r.config)) cfg[k] = v;
  doc["partial"] = r.partial;
  if (!r.text.empty()) {
    doc["decomposition"] = r.text;
    return doc.dump(2) + "\n";
  }
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json j;
    j["experiment"] = row.experiment;
    j["group"] = row.group;
    j["n"] = row.n;
    j["trial"] = row.trial;
    j["statistic"] = row.statistic;
    j["lower"] = number(row.lower);
    j["upper"] = number(row.upper);
    j["exact"] = row.exact;
    j["seed"] = row.seed;
    rows.push_back(std::move(j));
  }
  auto& summary = doc["summary"] = nlohmann::ordered_json::object();
  auto& means = summary["means"] = nlohmann::ordered_json::array();
  for (const auto& m : r.means) {
    nlohmann::ordered_json j;
    j["statistic"] = m.statistic;
    j["n"] = m.n;
    j["count"] = m.upper.count;
    j["lower_mean"] = number(m.lower.mean);
    j["upper_mean"] = number(m.upper.mean);
    j["upper_ci_low"] = number(m.upper.ci_low);
    j["upper_ci_high"] = number(m.upper.ci_high);
    j["upper_max"] = number(m.upper_max);
    j["exact_fraction"] = number(m.exact_fraction);
    means.push_back(std::move(j));
  }
  auto& fits = summary["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : r.fits) {
    nlohmann::ordered_json j;
    j["statistic"] = f.statistic;
    j["rank"] = f.rank;
    j["shape"] = shape_name(f.fit.shape);
    j["coefficient"] = number(f.fit.coefficient);
    if (f.fit.shape == Shape::Power) j["exponent"] = number(f.fit.exponent);
    j["r_squared"] = number(f.fit.r_squared);
    fits.push_back(std::move(j));
  }
  auto& tails = summary["tails"] = nlohmann::ordered_json::array();
  for (const auto& t : r.tails) {
    nlohmann::ordered_json j;
    j["statistic"] = t.statistic;
    j["n"] = t.n;
    j["kind"] = "exponential";
    j["rate"] = number(t.fit.rate_or_exponent);
    j["r_squared"] = number(t.fit.r_squared);
    j["points"] = t.fit.points_used;
    tails.push_back(std::move(j));
  }
  summary["notes"] = r.notes;
  return doc.dump(2) + "\n";
}

std::string render(const ExperimentResult& result) {
  return result.config.format == "json" ? render_json(result) : render_csv(result);
}

std::vector<ResultRow> parse_result_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ResultRow> rows;
  bool in_rows = false;
  std::size_t number = 0;
  auto parse_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw MalformedInput("line " + std::to_string(number) + ": bad number '" + s + "'");
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "experiment,group,n,trial,statistic,lower,upper,exact,seed") {
      in_rows = true;
      continue;
    }
    if (line.empty() || line[0] == '#') {
      if (line == "# summary") in_rows = false;
      continue;
    }
    if (!in_rows) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw MalformedInput("line " + std::to_string(number) + ": expected 9 columns");
    }
    ResultRow row;
    row.experiment = f[0];
    row.group = f[1];
    row.n = parse_unsigned("n", f[2]);
    row.trial = parse_unsigned("trial", f[3]);
    row.statistic = f[4];
    row.lower = parse_double(f[5]);
    row.upper = parse_double(f[6]);
    if (f[7] != "0" && f[7] != "1") {
      throw MalformedInput("line " + std::to_string(number) + ": exact must be 0 or 1");
    }
    row.exact = f[7] == "1";
    row.seed = parse_unsigned("seed", f[8]);
    if (row.lower > row.upper) {
      throw MalformedInput("line " + std::to_string(number) + ": lower exceeds upper");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rwtrack
