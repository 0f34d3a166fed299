#pragma once

#include <string>

#include "pneuro/pneuron.hpp"

namespace pneuro {

enum class FitFamily { tanh_like, logistic, relu, linear };

FitFamily fit_family_from_string(const std::string& s);
const char* to_string(FitFamily f);

// Least-squares fit of y = a * f((x - c)/b) + d over the family.
// `degenerate` is set when the data carries no shape to fit (a ~ 0).
struct FitResult {
    double a = 0.0, b = 1.0, c = 0.0, d = 0.0;
    double rmse = 0.0;
    bool degenerate = false;
};

// Needs at least 4 points; throws std::runtime_error with the residual when
// the optimizer fails to produce a finite fit.
FitResult fit_reference(const TransferCurve& curve, FitFamily family);

}  // namespace pneuro
