#include "omegaforge/lawful.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include <gmpxx.h>

namespace omegaforge {

namespace {

// Greedy Leja order: start from the knot of largest magnitude, then
// repeatedly take the knot maximizing the product of distances to those
// already chosen.
std::vector<std::size_t> leja_order(const std::vector<double>& t) {
  const std::size_t n = t.size();
  std::vector<std::size_t> order;
  std::vector<long double> product(n, 1.0L);
  std::vector<bool> used(n, false);
  std::size_t next = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(t[i]) > std::abs(t[next])) next = i;
  }
  while (order.size() < n) {
    order.push_back(next);
    used[next] = true;
    long double best = -1.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      product[i] *= std::abs(static_cast<long double>(t[i]) - t[next]);
      if (product[i] > best) {
        best = product[i];
        next = i;
      }
    }
  }
  return order;
}

// Divided-difference table collapsed in place to Newton coefficients.
std::vector<long double> newton_coefficients(const std::vector<double>& t,
                                            const std::vector<double>& v) {
  const std::size_t n = t.size();
  std::vector<long double> c(v.begin(), v.end());
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      c[i] = (c[i] - c[i - 1]) / (static_cast<long double>(t[i]) - t[i - level]);
    }
  }
  return c;
}

double newton_eval(const std::vector<double>& t, const std::vector<long double>& c, double x) {
  long double acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * (static_cast<long double>(x) - t[i]) + c[i];
  return static_cast<double>(acc);
}

}  // namespace

Point CurveDescription::evaluate(double t) const {
  return {newton_eval(centers, x_coeffs, t), newton_eval(centers, y_coeffs, t)};
}

CurveDescription interpolate(std::span<const Point> points) {
  if (points.empty()) throw Error("cannot interpolate an empty point set", true);
  CurveDescription curve;
  const std::size_t n = points.size();
  curve.knots.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double d = std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
    if (d == 0.0) {
      throw Error("points " + std::to_string(i) + " and " + std::to_string(i + 1) +
                  " coincide (zero chord)");
    }
    curve.knots[i] = curve.knots[i - 1] + d;
  }
  if (n > 1) {
    const double total = curve.knots.back();
    for (auto& k : curve.knots) k /= total;
    curve.knots.back() = 1.0;
  }
  std::vector<double> xs, ys;
  for (const std::size_t i : leja_order(curve.knots)) {
    curve.centers.push_back(curve.knots[i]);
    xs.push_back(points[i].x);
    ys.push_back(points[i].y);
  }
  curve.x_coeffs = newton_coefficients(curve.centers, xs);
  curve.y_coeffs = newton_coefficients(curve.centers, ys);
  return curve;
}

std::uint64_t describe_size(const CurveDescription& curve, unsigned precision_bits) {
  if (precision_bits < 1) throw Error("precision must be at least 1 bit", true);
  const std::uint64_t n = curve.point_count();
  const std::uint64_t coefficients = curve.x_coeffs.size() + curve.y_coeffs.size();
  const std::uint64_t header = gamma_encode(n).size() + gamma_encode(precision_bits).size();
  return coefficients * precision_bits + header;
}

const char* to_string(Verdict verdict) {
  return verdict == Verdict::Lawful ? "LAWFUL" : "LAWLESS_AT_BUDGET";
}

LawVerdict classify(const BitString& data, const ComplexityIndex* index, Ratio threshold) {
  if (data.empty()) throw Error("cannot classify empty data", true);
  if (threshold.den == 0) throw Error("threshold denominator must be positive", true);
  LawVerdict v;
  v.rule = complexity_upper(data, index);
  v.raw_size = data.size();
  v.rule_size_upper = v.rule.value;
  v.ratio = static_cast<double>(v.rule_size_upper) / static_cast<double>(v.raw_size);
  auto z = [](std::uint64_t x) { return mpz_class(std::to_string(x)); };
  const bool lawful =
      z(v.rule_size_upper) * z(threshold.den) <= z(threshold.num) * z(v.raw_size);
  v.verdict = lawful ? Verdict::Lawful : Verdict::LawlessAtBudget;
  return v;
}

std::vector<Point> read_points_csv(std::istream& in) {
  std::vector<Point> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    Point p;
    bool ok = comma != std::string::npos;
    if (ok) {
      try {
        std::size_t used = 0;
        p.x = std::stod(line.substr(0, comma), &used);
        p.y = std::stod(line.substr(comma + 1), &used);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      if (points.empty() && line_no == 1) continue;  // header
      throw Error("point file line " + std::to_string(line_no) + ": expected 'x,y'");
    }
    points.push_back(p);
  }
  return points;
}

std::string curve_samples(const CurveDescription& curve, std::size_t samples) {
  std::ostringstream out;
  out.precision(17);
  out << "# t x y\n";
  const std::size_t count = samples < 2 ? 2 : samples;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    const Point p = curve.evaluate(t);
    out << t << ' ' << p.x << ' ' << p.y << '\n';
  }
  return out.str();
}

}  // namespace omegaforge
