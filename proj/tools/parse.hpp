#pragma once

// Text forms accepted on the command line.

#include <complex>
#include <stdexcept>
#include <string>

#include "hecke/gaussian.hpp"
#include "hecke/survey.hpp"

namespace hecke::cli {

/// "a+bi", "a-bi", "a", "bi", "i", "-i" (spaces ignored).
inline GaussInt parse_gauss_int(std::string text) {
  std::erase(text, ' ');
  const auto fail = [original = text] { return std::invalid_argument("cannot parse Gaussian integer '" + original + "'"); };
  const auto integer = [&](const std::string& s) -> i64 {
    if (s.empty() || s.find_first_not_of("0123456789", s[0] == '+' || s[0] == '-' ? 1 : 0) != std::string::npos ||
        s == "+" || s == "-")
      throw fail();
    return std::stoll(s);
  };
  if (text.empty()) throw fail();
  if (text.back() != 'i') return GaussInt{integer(text)};
  text.pop_back();
  const auto split = text.find_last_of("+-");
  const bool has_real = split != std::string::npos && split > 0;
  const std::string re = has_real ? text.substr(0, split) : "";
  std::string im = has_real ? text.substr(split) : text;
  if (im.empty() || im == "+" || im == "-") im += "1";
  return GaussInt{has_real ? integer(re) : 0, integer(im)};
}

/// "re,im" or "re".
inline std::complex<double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  std::size_t used = 0;
  try {
    const double re = std::stod(text.substr(0, comma), &used);
    if (used != text.substr(0, comma).size()) throw std::invalid_argument("");
    if (comma == std::string::npos) return {re, 0.0};
    const std::string rest = text.substr(comma + 1);
    const double im = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
    return {re, im};
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse complex number '" + text + "' (expected re,im)");
  }
}

inline EnumerationMode parse_mode(const std::string& text) {
  if (text == "primary") return EnumerationMode::primary;
  if (text == "all_associates") return EnumerationMode::all_associates;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

}  // namespace hecke::cli
