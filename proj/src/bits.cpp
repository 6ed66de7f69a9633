#include "revtm/bits.hpp"

#include <algorithm>

namespace revtm {

bool is_bits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

Bits bijective_binary(std::uint64_t n) {
  // n + 1 may overflow for n = 2^64 - 1; handle by building from n directly.
  Bits out;
  unsigned __int128 m = static_cast<unsigned __int128>(n) + 1;
  while (m > 1) {
    out.push_back(static_cast<char>('0' + static_cast<int>(m & 1)));
    m >>= 1;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<std::uint64_t> bijective_value(std::string_view bits) {
  if (bits.size() >= 64 || !is_bits(bits)) return std::nullopt;
  std::uint64_t m = 1;
  for (char c : bits) m = (m << 1) | static_cast<std::uint64_t>(c - '0');
  return m - 1;
}

Bits self_delimit(std::string_view bits) {
  Bits out;
  out.reserve(2 * bits.size() + 2);
  for (char c : bits) {
    out.push_back(c);
    out.push_back(c);
  }
  out += "01";
  return out;
}

Bits encode_index(std::uint64_t i) { return self_delimit(bijective_binary(i)); }

Bits literal_payload(std::string_view x) {
  return self_delimit(bijective_binary(x.size())) + Bits(x);
}

SelfDelimitedParse parse_self_delimited(std::string_view stream) {
  Bits value;
  std::size_t pos = 0;
  while (true) {
    if (pos + 2 > stream.size()) {
      return {SelfDelimitedParse::Status::NeedMore, {}, stream.size()};
    }
    char a = stream[pos];
    char b = stream[pos + 1];
    pos += 2;
    if (a == b) {
      value.push_back(a);
    } else if (a == '0') {
      return {SelfDelimitedParse::Status::Complete, value, pos};
    } else {
      return {SelfDelimitedParse::Status::Malformed, {}, pos};
    }
  }
}

}  // namespace revtm
