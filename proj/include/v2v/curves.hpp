#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace v2v {

enum class CurveFamily { kAffine, kPower, kPiecewise };

std::string_view to_string(CurveFamily family);
CurveFamily parse_curve_family(std::string_view name);

// A scalar curve on [0, 1] drawn from a small parametric family.
//
//   affine     params = {a, b}              c(x) = a + b x
//   power      params = {a, b, k}           c(x) = a + b x^k
//   piecewise  params = {x0, y0, x1, y1...} linear interpolation, x0 = 0,
//                                           last x = 1, x strictly increasing
class Curve {
 public:
  Curve(CurveFamily family, std::vector<double> params);

  static Curve affine(double intercept, double slope);
  static Curve constant(double value) { return affine(value, 0.0); }
  static Curve power(double intercept, double scale, double exponent);
  static Curve piecewise(std::vector<double> knots_xy);

  // Parses "family:p0,p1,..." (the command-line form).
  static Curve parse(std::string_view text);

  double operator()(double x) const;

  // Inverse on [c(0), c(1)]; requires a strictly increasing curve.
  // Values within 1e-12 outside the range are clamped to the ends.
  double inverse(double value) const;

  bool strictly_increasing() const;

  CurveFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::string to_spec() const;

 private:
  CurveFamily family_;
  std::vector<double> params_;
};

// The environment: broadcast curves t(y), f(y) and the crash curve p(d).
struct ModelCurves {
  Curve t_curve;
  Curve f_curve;
  Curve p_curve;
};

}  // namespace v2v
