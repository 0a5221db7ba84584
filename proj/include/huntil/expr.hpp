#pragma once

#include <map>
#include <string>

#include "huntil/core.hpp"

namespace huntil {

// Symbols available to parsed expressions: state coordinates by name plus
// named numeric parameters.
struct ExprEnv {
  int dim = 0;
  std::map<std::string, int> coords;
  std::map<std::string, double> params;
};

// Arithmetic over +, -, *, /, ^ with unary minus, parentheses, numbers,
// coordinate/parameter references, and min, max, abs, exp, log, sqrt.
// Gradients come from central differences.
ScalarFn parse_expression(const std::string& text, const ExprEnv& env);

// "lhs REL rhs" with REL one of <=, <, =, ==, >=, >.
Constraint parse_constraint(const std::string& text, const ExprEnv& env);

}  // namespace huntil
