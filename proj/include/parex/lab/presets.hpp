#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parex/basis/coefficient_field.hpp"
#include "parex/oracles/exact.hpp"

namespace parex::lab {

using basis::CoefficientField;

// A registered model: coefficient field with analytic derivatives, a default
// evaluation point, and (for constant coefficients) the closed-form model.
struct Preset {
  std::string name;
  std::string description;
  CoefficientField field;
  Eigen::VectorXd x0;
  oracles::PayoffSpec default_payoff;
  std::optional<oracles::ConstantModel> constant;  // set iff coefficients are constant
  double ellipticity_M = 0;
};

std::vector<std::string> preset_names();
Preset make_preset(const std::string& name);  // throws std::invalid_argument on unknown name

}  // namespace parex::lab
