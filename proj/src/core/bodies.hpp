#pragma once

#include <string>
#include <vector>

#include "funcspec.hpp"
#include "mat.hpp"

namespace fivol {

struct ClassicalBody {
    enum class Kind { Ball, Box };
    Kind kind = Kind::Ball;
    int n = 0;
    double rho = 1.0;  // Ball
    Vec halfwidths;    // Box
};

// V_0 .. V_n
std::vector<double> classical_intrinsic_volumes(const ClassicalBody& K);

// vol(K + r B^n) by direct geometric decomposition (independent of the
// Steiner polynomial machinery); n <= 3
double mink_volume(const ClassicalBody& K, double r);

SpecPtr body_indicator(const ClassicalBody& K);

ClassicalBody body_from_json(const std::string& text);

}  // namespace fivol
