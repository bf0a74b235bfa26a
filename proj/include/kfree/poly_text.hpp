#pragma once

#include <string>
#include <string_view>

#include "kfree/poly.hpp"

namespace kfree {

// Canonical text encoding, shared by the CLI, certificates and cache files.
//
//   q <= 10 : one base-q digit per coefficient, constant term first.
//             x^3 + x + 1 over GF(2) is "1101".
//   q >  10 : comma-separated coefficients, constant term first; each
//             coefficient is its coordinate tuple over GF(p) joined by ':'
//             (a single integer when f = 1). "3,0,1" is x^2 + 3 over GF(11).
//
// The zero polynomial is "0". Parsing accepts trailing zero coefficients and
// canonicalises them away.

std::string to_text(const Poly& f);
Poly parse_poly(const Field& field, std::string_view text);

}  // namespace kfree
