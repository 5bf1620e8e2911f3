#include "arcsem/catalog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arcsem {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double theta) {
  return (theta < -kPi || theta > kPi) ? std::remainder(theta, 2.0 * kPi) : theta;
}

}  // namespace

double step_pi3(double theta) {
  const double d = std::abs(wrap(theta)) - kPi / 3.0;
  return 2.0 + (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
}

// cos 2t - cosh(1/5) = -2 (sin^2 t + sinh^2(1/10)), without the cancellation near t = 0.
double fig5_function(double theta) {
  const double s = std::sin(theta), h = std::sinh(0.1);
  return -0.5 / (s * s + h * h);
}

double heat_initial(double theta, double eps) {
  const double t = wrap(theta), q = kPi / 4.0;
  if (t < -q - eps) return 0.0;
  if (t < -q + eps) return 1.0 + (t - eps + q) / (2.0 * eps);
  if (t < q - eps) return 2.0 + (t + eps - q) / kPi;
  if (t < q + eps) return 2.0 - (t + eps - q) / eps;
  return 0.0;
}

double convection_initial(double theta) {
  const double t = wrap(theta);
  const double g = std::exp(-std::cos(4.0 * t));
  return std::abs(t) <= kPi / 4.0 ? g * std::sin(3.0 * t) : g * std::sin(t);
}

double schrodinger_initial(double theta) {
  return std::sin(7.0 * theta) + std::exp(-std::cos(theta));
}

const std::vector<CatalogEntry>& function_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"one", "constant 1", [](double) { return 1.0; }},
      {"cos", "cos(theta)", [](double t) { return std::cos(t); }},
      {"sin", "sin(theta)", [](double t) { return std::sin(t); }},
      {"step_pi3", "2 + sgn(|theta| - pi/3)", step_pi3},
      {"fig5", "1/(cos(2 theta) - cosh(1/5))", fig5_function},
      {"fig5_exp", "exp(sin theta)/(cos(2 theta) - cosh(1/5))",
       [](double t) { return std::exp(std::sin(t)) * fig5_function(t); }},
      {"heat_ic", "piecewise linear bump with eps = 0.005",
       [](double t) { return heat_initial(t); }},
      {"conv_ic", "exp(-cos 4theta) sin(3theta) for |theta| <= pi/4, else exp(-cos 4theta) sin(theta)",
       convection_initial},
      {"schrodinger_ic", "sin(7 theta) + exp(-cos theta)", schrodinger_initial},
      {"sin7", "sin(7 theta)", [](double t) { return std::sin(7 * t); }},
      {"zero", "constant 0", [](double) { return 0.0; }},
      {"conv_velocity", "-sin(theta)/1000", [](double t) { return -std::sin(t) / 1000; }},
      {"exp_cos", "exp(cos theta)", [](double t) { return std::exp(std::cos(t)); }},
      {"exp_mcos", "exp(-cos theta)", [](double t) { return std::exp(-std::cos(t)); }},
  };
  return entries;
}

Function catalog_function(const std::string& name) {
  for (const auto& e : function_catalog())
    if (e.name == name) return e.f;
  throw std::out_of_range("unknown function '" + name + "'");
}

}  // namespace arcsem
