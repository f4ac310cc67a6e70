#include "rwtrack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "rwtrack/errors.hpp"

namespace rwtrack {

namespace {

std::size_t bounded(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

void require_fit_points(std::span<const FitPoint> points) {
  std::set<double> distinct;
  for (const auto& p : points) {
    if (p.n < 2) throw InvalidArgument("fit points need n >= 2");
    if (!std::isfinite(p.y)) throw InvalidArgument("fit values must be finite");
    distinct.insert(p.n);
  }
  if (distinct.size() < 3) throw InvalidArgument("fit needs at least 3 distinct n values");
}

double uncentered_r2(std::span<const FitPoint> points, const std::vector<double>& basis,
                     double coefficient) {
  double ss_res = 0;
  double ss_tot = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double r = points[i].y - coefficient * basis[i];
    ss_res += r * r;
    ss_tot += points[i].y * points[i].y;
  }
  if (ss_tot == 0) return ss_res == 0 ? 1.0 : 0.0;
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

}  // namespace

Summary summarize(std::span<const double> values, std::uint64_t seed, std::size_t resamples) {
  if (values.empty()) throw InvalidArgument("summarize needs at least one value");
  Summary s;
  s.count = values.size();
  double total = 0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  if (resamples == 0) {
    s.ci_low = s.ci_high = s.mean;
    return s;
  }
  std::mt19937_64 rng(seed);
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += values[bounded(rng, values.size())];
    m = acc / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  auto lo = static_cast<std::size_t>(std::floor(0.025 * static_cast<double>(resamples)));
  auto hi = static_cast<std::size_t>(std::ceil(0.975 * static_cast<double>(resamples))) - 1;
  s.ci_low = means[std::min(lo, resamples - 1)];
  s.ci_high = means[std::min(hi, resamples - 1)];
  return s;
}

std::string shape_name(Shape shape) {
  switch (shape) {
    case Shape::Log:
      return "log";
    case Shape::LogSquared:
      return "log_squared";
    case Shape::SqrtNLog:
      return "sqrt_nlog";
    case Shape::Power:
      return "power";
    case Shape::Linear:
      return "linear";
  }
  return {};
}

Shape parse_shape(const std::string& name) {
  for (Shape s : {Shape::Log, Shape::LogSquared, Shape::SqrtNLog, Shape::Power, Shape::Linear}) {
    if (shape_name(s) == name) return s;
  }
  throw InvalidArgument("unknown shape '" + name + "'");
}

double shape_basis(Shape shape, double n, double exponent) {
  switch (shape) {
    case Shape::Log:
      return std::log(n);
    case Shape::LogSquared:
      return std::log(n) * std::log(n);
    case Shape::SqrtNLog:
      return std::sqrt(n * std::log(n));
    case Shape::Power:
      return std::pow(n, exponent);
    case Shape::Linear:
      return n;
  }
  return 0;
}

int shape_parameters(Shape shape) { return shape == Shape::Power ? 2 : 1; }

LinearRegression linear_regression(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw InvalidArgument("regression needs at least two distinct x values");
  LinearRegression r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - r.intercept - r.slope * x[i];
    ss_res += e * e;
  }
  r.r_squared = syy == 0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return r;
}

FitResult fit_shape(std::span<const FitPoint> points, Shape shape) {
  require_fit_points(points);
  FitResult fit;
  fit.shape = shape;
  fit.parameters = shape_parameters(shape);
  if (shape == Shape::Power) {
    std::vector<double> lx, ly;
    for (const auto& p : points) {
      if (p.y <= 0) throw InvalidArgument("power fit needs positive values");
      lx.push_back(std::log(p.n));
      ly.push_back(std::log(p.y));
    }
    fit.exponent = linear_regression(lx, ly).slope;
  }
  std::vector<double> basis;
  double sff = 0, syf = 0;
  for (const auto& p : points) {
    double f = shape_basis(shape, p.n, fit.exponent);
    basis.push_back(f);
    sff += f * f;
    syf += p.y * f;
  }
  fit.coefficient = syf / sff;
  fit.r_squared = uncentered_r2(points, basis, fit.coefficient);
  return fit;
}

InterceptFit fit_shape_with_intercept(std::span<const FitPoint> points, Shape shape) {
  require_fit_points(points);
  if (shape == Shape::Power) throw InvalidArgument("intercept mode is not defined for power");
  std::vector<double> x, y;
  for (const auto& p : points) {
    x.push_back(shape_basis(shape, p.n));
    y.push_back(p.y);
  }
  auto r = linear_regression(x, y);
  return {r.intercept, r.slope, r.r_squared};
}

std::vector<FitResult> model_compare(std::span<const FitPoint> points,
                                     std::span<const Shape> shapes) {
  std::vector<FitResult> fits;
  for (Shape s : shapes) fits.push_back(fit_shape(points, s));
  std::stable_sort(fits.begin(), fits.end(), [](const FitResult& a, const FitResult& b) {
    if (a.r_squared != b.r_squared) return a.r_squared > b.r_squared;
    return a.parameters < b.parameters;
  });
  return fits;
}

TailFit tail_fit_exponential(std::span<const double> samples, std::size_t min_count) {
  if (samples.size() < 100) throw InvalidArgument("exponential tail fit needs >= 100 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw InvalidArgument("tail fit on constant samples");
  const double median = sorted[(sorted.size() - 1) / 2];
  const auto total = static_cast<double>(sorted.size());
  std::vector<double> thresholds, log_survival;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    if (sorted[i] < median) continue;
    const std::size_t count = sorted.size() - i;  // samples >= sorted[i]
    if (count < min_count) break;
    thresholds.push_back(sorted[i]);
    log_survival.push_back(std::log(static_cast<double>(count) / total));
  }
  if (thresholds.size() < 3) throw InvalidArgument("tail fit needs at least 3 thresholds");
  auto r = linear_regression(thresholds, log_survival);
  return {TailKind::Exponential, -r.slope, r.intercept, r.r_squared, thresholds.size()};
}

TailFit tail_fit_polynomial(std::span<const FitPoint> survival) {
  std::vector<double> lx, ly;
  for (const auto& p : survival) {
    if (p.n <= 0 || p.y <= 0) continue;
    lx.push_back(std::log(p.n));
    ly.push_back(std::log(p.y));
  }
  if (lx.size() < 3) throw InvalidArgument("polynomial tail fit needs >= 3 positive survival values");
  auto r = linear_regression(lx, ly);
  return {TailKind::Polynomial, -r.slope, r.intercept, r.r_squared, lx.size()};
}

void SampleTable::add(std::size_t n, std::size_t trial, const std::string& name, double value) {
  if (!std::isfinite(value) || value < 0) {
    throw InvalidArgument("sample value for " + name + " must be finite and nonnegative");
  }
  if (!rows_.emplace(Key{n, trial, name}, value).second) {
    throw InvalidArgument("duplicate sample for " + name + " at n = " + std::to_string(n) +
                          ", trial " + std::to_string(trial));
  }
}

std::optional<double> SampleTable::find(std::size_t n, std::size_t trial,
                                        const std::string& name) const {
  auto it = rows_.find(Key{n, trial, name});
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> SampleTable::values(std::size_t n, const std::string& name) const {
  std::vector<double> out;
  for (auto it = rows_.lower_bound(Key{n, 0, ""}); it != rows_.end() && it->first.n == n; ++it) {
    if (it->first.name == name) out.push_back(it->second);
  }
  return out;
}

std::vector<std::size_t> SampleTable::sizes(const std::string& name) const {
  std::set<std::size_t> out;
  for (const auto& [key, value] : rows_) {
    if (key.name == name) out.insert(key.n);
  }
  return {out.begin(), out.end()};
}

std::vector<FitPoint> SampleTable::means(const std::string& name) const {
  std::vector<FitPoint> out;
  for (auto n : sizes(name)) {
    const auto v = values(n, name);
    double sum = 0;
    for (double x : v) sum += x;
    out.push_back({static_cast<double>(n), sum / static_cast<double>(v.size())});
  }
  return out;
}

}  // namespace rwtrack
