#pragma once

#include <string>
#include <string_view>

namespace debris {

// Rounds half away from zero at four decimals, with the tie decided on the
// shortest decimal representation of x (so 0.12345 -> 0.1235 even though the
// binary value sits just below the tie).
double round_to_4dp(double x);
float round_to_4dp(float x);

// Shortest round-trip decimal text for a double.
std::string format_double(double x);

// Value rounded to 10 significant digits; used for every float written to
// JSON reports so that outputs are byte-stable.
double round_sig10(double x);

// Strict full-string parse; nullopt-like failure reported through ok.
bool parse_double(std::string_view text, double& out);

}  // namespace debris
