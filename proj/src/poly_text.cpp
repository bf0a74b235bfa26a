#include "kfree/poly_text.hpp"

#include <charconv>

#include "kfree/error.hpp"

namespace kfree {
namespace {

std::uint32_t parse_uint(std::string_view s) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw DomainError("malformed polynomial text near '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string to_text(const Poly& f) {
  if (f.is_zero()) return "0";
  const Field& k = f.field();
  std::string out;
  if (k.q() <= 10) {
    for (Elem c : f.coeffs()) out.push_back(static_cast<char>('0' + c));
    return out;
  }
  bool first = true;
  for (Elem c : f.coeffs()) {
    if (!first) out.push_back(',');
    first = false;
    if (k.f() == 1) {
      out += std::to_string(c);
      continue;
    }
    const auto coords = k.coords(c);
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) out.push_back(':');
      out += std::to_string(coords[i]);
    }
  }
  return out;
}

Poly parse_poly(const Field& k, std::string_view text) {
  if (text.empty()) throw DomainError("empty polynomial text");
  std::vector<Elem> coeffs;
  if (k.q() <= 10) {
    for (char ch : text) {
      if (ch < '0' || ch > '9' || static_cast<std::uint32_t>(ch - '0') >= k.q()) {
        throw DomainError(std::string("invalid digit '") + ch + "' for " + k.name());
      }
      coeffs.push_back(static_cast<Elem>(ch - '0'));
    }
    return Poly(k, std::move(coeffs));
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    if (k.f() == 1) {
      const std::uint32_t v = parse_uint(item);
      if (v >= k.q()) throw DomainError("coefficient out of range for " + k.name());
      coeffs.push_back(v);
    } else {
      std::vector<std::uint32_t> coords;
      std::size_t s = 0;
      while (s <= item.size()) {
        const std::size_t colon = std::min(item.find(':', s), item.size());
        coords.push_back(parse_uint(item.substr(s, colon - s)));
        s = colon + 1;
      }
      coeffs.push_back(k.from_coords(coords));
    }
    start = comma + 1;
  }
  return Poly(k, std::move(coeffs));
}

}  // namespace kfree
