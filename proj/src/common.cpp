#include "loch/common.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

namespace loch {

Tolerances default_tolerances() {
  Tolerances t;
  if (const char* env = std::getenv("LOCH_TOLERANCE")) {
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(env, &end);
    if (errno != 0 || end == env || *end != '\0' || !(v > 0.0))
      throw MalformedInput(std::string("LOCH_TOLERANCE must be a positive number, got '") + env + "'");
    t.representing = v;
    t.coherence = v;
  }
  return t;
}

namespace {

bool read_real(const std::string& s, std::size_t& pos, double& out) {
  const char* begin = s.c_str() + pos;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  if (end == begin || errno != 0) return false;
  pos += static_cast<std::size_t>(end - begin);
  return true;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s.push_back(ch);
  if (s.empty()) throw MalformedInput("empty complex literal");
  auto bad = [&] { return MalformedInput("bad complex literal '" + text + "' (expected RE+IMi)"); };

  // Pure imaginary forms: "i", "-i", "3i".
  if (s.back() == 'i' || s.back() == 'j') {
    std::string body = s.substr(0, s.size() - 1);
    // find the sign separating real and imaginary parts, skipping exponents
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    double re = 0.0, im = 0.0;
    std::string im_text = split == std::string::npos ? body : body.substr(split);
    if (split != std::string::npos) {
      std::string re_text = body.substr(0, split);
      std::size_t p = 0;
      if (!read_real(re_text, p, re) || p != re_text.size()) throw bad();
    }
    if (im_text.empty() || im_text == "+") {
      im = 1.0;
    } else if (im_text == "-") {
      im = -1.0;
    } else {
      std::size_t p = 0;
      if (!read_real(im_text, p, im) || p != im_text.size()) throw bad();
    }
    return {re, im};
  }
  double re = 0.0;
  std::size_t p = 0;
  if (!read_real(s, p, re) || p != s.size()) throw bad();
  return {re, 0.0};
}

std::string format_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace loch
