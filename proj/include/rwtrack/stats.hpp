#pragma once

// Aggregation and asymptotic-shape fitting.
//
// Shape fits are one-parameter least squares through the origin,
// y = C * f(n), and r_squared is always the uncentered coefficient of
// determination 1 - sum (y - C f)^2 / sum y^2 of that zero-intercept model.
// The power shape first fits its exponent on log-log axes and then its
// coefficient the same way. Logarithms are natural.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rwtrack {

struct Summary {
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::size_t count = 0;
};

inline constexpr std::uint64_t kBootstrapSeed = 0x5eedb007ULL;

/// Sample mean with a percentile bootstrap 95% interval.
Summary summarize(std::span<const double> values, std::uint64_t seed = kBootstrapSeed,
                  std::size_t resamples = 1000);

enum class Shape { Log, LogSquared, SqrtNLog, Power, Linear };

std::string shape_name(Shape shape);
Shape parse_shape(const std::string& name);
double shape_basis(Shape shape, double n, double exponent = 1.0);
int shape_parameters(Shape shape);

struct FitPoint {
  double n = 0;
  double y = 0;
};

struct FitResult {
  Shape shape = Shape::Log;
  double coefficient = 0;
  double exponent = 1;  // only meaningful for Shape::Power
  double r_squared = 0;
  int parameters = 1;
};

FitResult fit_shape(std::span<const FitPoint> points, Shape shape);

/// Diagnostic fit y = a + C f(n) with the usual centered r^2.
struct InterceptFit {
  double intercept = 0;
  double coefficient = 0;
  double r_squared = 0;
};
InterceptFit fit_shape_with_intercept(std::span<const FitPoint> points, Shape shape);

/// All requested fits, best r_squared first; ties go to fewer parameters.
std::vector<FitResult> model_compare(std::span<const FitPoint> points,
                                     std::span<const Shape> shapes);

enum class TailKind { Exponential, Polynomial };

struct TailFit {
  TailKind kind = TailKind::Exponential;
  double rate_or_exponent = 0;  // decay rate (exponential) or exponent (polynomial)
  double intercept = 0;         // log-survival intercept
  double r_squared = 0;
  std::size_t points_used = 0;
};

/// Regresses log P[X >= l] on l. Thresholds are the distinct sample values
/// from the sample median upward whose survival count is at least
/// `min_count`. Needs >= 100 samples and >= 3 usable thresholds.
TailFit tail_fit_exponential(std::span<const double> samples, std::size_t min_count = 10);

/// Regresses log p on log n for survival probabilities p observed at sizes n.
TailFit tail_fit_polynomial(std::span<const FitPoint> survival);

/// Ordinary least squares y = a + b x; returns (a, b, centered r^2).
struct LinearRegression {
  double intercept = 0;
  double slope = 0;
  double r_squared = 0;
};
LinearRegression linear_regression(std::span<const double> x, std::span<const double> y);

/// Per-trial statistics keyed by (n, trial, name). Values must be finite and
/// nonnegative and keys unique. Iteration order is the key order.
class SampleTable {
 public:
  struct Key {
    std::size_t n = 0;
    std::size_t trial = 0;
    std::string name;
    auto operator<=>(const Key&) const = default;
  };

  /// Throws InvalidArgument on a duplicate key or a bad value.
  void add(std::size_t n, std::size_t trial, const std::string& name, double value);

  std::size_t size() const { return rows_.size(); }
  const std::map<Key, double>& rows() const { return rows_; }
  std::optional<double> find(std::size_t n, std::size_t trial, const std::string& name) const;

  /// Values of one statistic at one n, in trial order.
  std::vector<double> values(std::size_t n, const std::string& name) const;
  /// Distinct n carrying the statistic, ascending.
  std::vector<std::size_t> sizes(const std::string& name) const;
  /// (n, mean) for every n carrying the statistic.
  std::vector<FitPoint> means(const std::string& name) const;

 private:
  std::map<Key, double> rows_;
};

}  // namespace rwtrack
