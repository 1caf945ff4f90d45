#include "v2v/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "v2v/errors.hpp"

namespace v2v {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_finite(const std::vector<double>& params) {
  for (double v : params) {
    if (!std::isfinite(v)) throw CurveError("curve parameter is not finite");
  }
}

}  // namespace

std::string_view to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::kAffine:
      return "affine";
    case CurveFamily::kPower:
      return "power";
    case CurveFamily::kPiecewise:
      return "piecewise";
  }
  return "?";
}

CurveFamily parse_curve_family(std::string_view name) {
  if (name == "affine") return CurveFamily::kAffine;
  if (name == "power") return CurveFamily::kPower;
  if (name == "piecewise") return CurveFamily::kPiecewise;
  throw CurveError("unknown curve family '" + std::string(name) + "'");
}

Curve::Curve(CurveFamily family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  require_finite(params_);
  switch (family_) {
    case CurveFamily::kAffine:
      if (params_.size() != 2) throw CurveError("affine curve takes 2 parameters");
      break;
    case CurveFamily::kPower:
      if (params_.size() != 3) throw CurveError("power curve takes 3 parameters");
      if (params_[2] <= 0.0) throw CurveError("power exponent must be positive");
      break;
    case CurveFamily::kPiecewise: {
      if (params_.size() < 4 || params_.size() % 2 != 0) {
        throw CurveError("piecewise curve takes an even number (>= 4) of knot values");
      }
      const std::size_t n = params_.size() / 2;
      if (params_[0] != 0.0 || params_[2 * (n - 1)] != 1.0) {
        throw CurveError("piecewise knots must span x = 0 to x = 1");
      }
      for (std::size_t i = 1; i < n; ++i) {
        if (!(params_[2 * i] > params_[2 * (i - 1)])) {
          throw CurveError("piecewise knot x values must be strictly increasing");
        }
      }
      break;
    }
  }
}

Curve Curve::affine(double intercept, double slope) {
  return Curve(CurveFamily::kAffine, {intercept, slope});
}

Curve Curve::power(double intercept, double scale, double exponent) {
  return Curve(CurveFamily::kPower, {intercept, scale, exponent});
}

Curve Curve::piecewise(std::vector<double> knots_xy) {
  return Curve(CurveFamily::kPiecewise, std::move(knots_xy));
}

Curve Curve::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw CurveError("curve spec must look like family:p0,p1,...");
  }
  const CurveFamily family = parse_curve_family(text.substr(0, colon));
  std::vector<double> params;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string item(rest.substr(0, comma));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw CurveError("bad curve parameter '" + item + "'");
    }
    if (used != item.size()) throw CurveError("bad curve parameter '" + item + "'");
    params.push_back(value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return Curve(family, std::move(params));
}

double Curve::operator()(double x) const {
  switch (family_) {
    case CurveFamily::kAffine:
      return params_[0] + params_[1] * x;
    case CurveFamily::kPower:
      return params_[0] + params_[1] * std::pow(x, params_[2]);
    case CurveFamily::kPiecewise: {
      const std::size_t n = params_.size() / 2;
      if (x <= params_[0]) return params_[1];
      for (std::size_t i = 1; i < n; ++i) {
        const double x1 = params_[2 * i];
        if (x <= x1 || i == n - 1) {
          const double x0 = params_[2 * (i - 1)];
          const double y0 = params_[2 * (i - 1) + 1];
          const double y1 = params_[2 * i + 1];
          return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
      }
      return params_.back();
    }
  }
  return 0.0;
}

bool Curve::strictly_increasing() const {
  switch (family_) {
    case CurveFamily::kAffine:
      return params_[1] > 0.0;
    case CurveFamily::kPower:
      return params_[1] > 0.0;
    case CurveFamily::kPiecewise:
      for (std::size_t i = 3; i < params_.size(); i += 2) {
        if (!(params_[i] > params_[i - 2])) return false;
      }
      return true;
  }
  return false;
}

double Curve::inverse(double value) const {
  if (!strictly_increasing()) throw CurveError("inverse of a non-increasing curve");
  const double lo = (*this)(0.0);
  const double hi = (*this)(1.0);
  constexpr double kSlack = 1e-12;
  if (value < lo - kSlack || value > hi + kSlack) {
    throw CurveError("inverse requested outside the curve's range");
  }
  value = std::clamp(value, lo, hi);
  switch (family_) {
    case CurveFamily::kAffine:
      return std::clamp((value - params_[0]) / params_[1], 0.0, 1.0);
    case CurveFamily::kPower:
      return std::clamp(std::pow((value - params_[0]) / params_[1], 1.0 / params_[2]),
                        0.0, 1.0);
    case CurveFamily::kPiecewise: {
      double a = 0.0;
      double b = 1.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double c = (*this)(mid);
        if (std::abs(c - value) <= 1e-12 && b - a <= 1e-12) return mid;
        if (c < value) {
          a = mid;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
  }
  return 0.0;
}

std::string Curve::to_spec() const {
  std::string out(to_string(family_));
  out += ':';
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) out += ',';
    out += format_double(params_[i]);
  }
  return out;
}

}  // namespace v2v
