#include "qmt/rational.hpp"

#include <cctype>

namespace qmt {

Rat parse_rat(std::string_view text) {
  std::size_t i = 0;
  auto fail = [&](const std::string& why) -> Rat { throw ParseError("bad rational '" + std::string(text) + "': " + why, i); };
  if (text.empty()) return fail("empty");
  bool neg = false;
  if (text[i] == '-') {
    neg = true;
    ++i;
  }
  auto digits = [&]() -> BigInt {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) fail("digit expected");
    BigInt v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i] - '0');
      ++i;
    }
    return v;
  };
  BigInt ip = digits();
  Rat result;
  if (i < text.size() && text[i] == '/') {
    ++i;
    BigInt den = digits();
    if (den == 0) fail("zero denominator");
    result = Rat(ip, den);
  } else if (i < text.size() && text[i] == '.') {
    ++i;
    std::size_t start = i;
    BigInt frac = digits();
    std::size_t places = i - start;
    BigInt scale = 1;
    for (std::size_t p = 0; p < places; ++p) scale *= 10;
    result = Rat(ip * scale + frac, scale);
  } else {
    result = Rat(ip);
  }
  if (i != text.size()) fail("trailing characters");
  if (neg) result = -result;
  return result;
}

}  // namespace qmt
