#include "latharm/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace latharm::detail {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  // from_chars does not accept a leading '+'.
  if (s.front() == '+') s.remove_prefix(1);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::string format_complex(std::complex<double> v) {
  if (v.imag() == 0.0) return format_double(v.real());
  std::string s;
  if (v.real() != 0.0) {
    s = format_double(v.real());
    if (v.imag() > 0.0 || std::isnan(v.imag())) s += '+';
  }
  s += format_double(v.imag());
  s += 'i';
  return s;
}

bool parse_complex(std::string_view s, std::complex<double>& out) {
  if (s.empty()) return false;
  if (s.back() == 'i') {
    s.remove_suffix(1);
    // Split "a+bi"/"a-bi" at the sign that separates the parts (not a leading
    // sign and not an exponent sign).
    for (std::size_t pos = s.size(); pos-- > 1;) {
      const char c = s[pos];
      if ((c == '+' || c == '-') && s[pos - 1] != 'e' && s[pos - 1] != 'E') {
        double re = 0.0, im = 0.0;
        std::string_view im_part = s.substr(pos);
        if (im_part == "+" || im_part == "-") im_part = im_part == "+" ? "1" : "-1";
        if (!parse_double(s.substr(0, pos), re) || !parse_double(im_part, im)) return false;
        out = {re, im};
        return true;
      }
    }
    double im = 0.0;
    std::string_view im_part = s;
    if (im_part.empty() || im_part == "+" || im_part == "-")
      im_part = (im_part == "-") ? "-1" : "1";
    if (!parse_double(im_part, im)) return false;
    out = {0.0, im};
    return true;
  }
  double re = 0.0;
  if (!parse_double(s, re)) return false;
  out = {re, 0.0};
  return true;
}

}  // namespace latharm::detail
