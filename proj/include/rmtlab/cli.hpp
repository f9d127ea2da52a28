#pragma once

#include <complex>
#include <string>
#include <vector>

namespace rmtlab::cli {

// Routes a command line (without the program name) to the corresponding
// library operation.  Exit codes: 0 success, 1 usage error, 2 mathematical
// property violation, 3 runtime failure.
int dispatch(std::vector<std::string> args);

// Single-token complex literal: "1+0.05i", "2i", "-0.5-0.2i", "3".
std::complex<double> parse_complex(const std::string& text);

}  // namespace rmtlab::cli
