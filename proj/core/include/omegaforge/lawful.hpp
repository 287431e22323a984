#pragma once

// Any finite set of points lies on some curve, so the existence of a rule
// says nothing by itself; what separates a law from a lookup table is that
// the rule is much shorter than the data.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "omegaforge/complexity.hpp"

namespace omegaforge {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Parametric polynomial curve through a point set, visiting the points in
/// order.  Knots are chordal (cumulative distance, scaled to [0, 1]);
/// x(t) and y(t) are stored in Newton form whose centers are the knots
/// taken in Leja order; the monotone order loses several digits by 16 points.
struct CurveDescription {
  std::vector<double> knots;    // in point order
  std::vector<double> centers;  // the knots, permuted into Leja order
  // Extended precision: short chords give divided differences near 1e15.
  std::vector<long double> x_coeffs;
  std::vector<long double> y_coeffs;

  std::size_t point_count() const noexcept { return knots.size(); }
  Point evaluate(double t) const;
};

/// Throws Error on an empty set or on two equal consecutive points.
CurveDescription interpolate(std::span<const Point> points);

/// Coefficient count times precision, plus a header holding the gamma-coded
/// point count and precision.
std::uint64_t describe_size(const CurveDescription& curve, unsigned precision_bits);

/// Exact rational threshold for the lawful verdict.
struct Ratio {
  std::uint64_t num = 1;
  std::uint64_t den = 2;
};

enum class Verdict { Lawful, LawlessAtBudget };
const char* to_string(Verdict verdict);

struct LawVerdict {
  std::uint64_t raw_size = 0;
  std::uint64_t rule_size_upper = 0;
  double ratio = 0.0;
  Verdict verdict = Verdict::LawlessAtBudget;
  ComplexityBound rule;
};

/// Data is lawful when its best known program is at most `threshold` times
/// its length.  Lawless verdicts only mean no short rule was found.
LawVerdict classify(const BitString& data, const ComplexityIndex* index = nullptr,
                    Ratio threshold = {});

/// "x,y" per line in file order.  A first line that does not parse as
/// numbers is treated as a header.
std::vector<Point> read_points_csv(std::istream& in);

/// gnuplot-ready "t x y" samples of the curve, evenly spaced in t.
std::string curve_samples(const CurveDescription& curve, std::size_t samples);

}  // namespace omegaforge
