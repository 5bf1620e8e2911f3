#pragma once

#include <string>
#include <vector>

#include "arcsem/piecewise.hpp"

namespace arcsem {

// Named example functions of theta on [-pi, pi], extended periodically.
struct CatalogEntry {
  std::string name;
  std::string description;
  Function f;
};

const std::vector<CatalogEntry>& function_catalog();
// Throws std::out_of_range for unknown names.
Function catalog_function(const std::string& name);

double step_pi3(double theta);                        // 2 + sgn(|theta| - pi/3)
double fig5_function(double theta);                   // 1/(cos 2theta - cosh(1/5))
double heat_initial(double theta, double eps = 0.005);  // piecewise linear bump
double convection_initial(double theta);
double schrodinger_initial(double theta);             // sin 7theta + exp(-cos theta)

}  // namespace arcsem
