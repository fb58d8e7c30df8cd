#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace latharm::detail {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);
// Strict double parse of the whole string; returns false on any junk.
bool parse_double(std::string_view s, double& out);

// Complex literals "a", "a+bi", "a-bi", "bi" used in symbol tags and configs.
std::string format_complex(std::complex<double> v);
bool parse_complex(std::string_view s, std::complex<double>& out);

}  // namespace latharm::detail
