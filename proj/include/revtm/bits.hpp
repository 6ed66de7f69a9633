#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace revtm {

/// Binary strings are plain std::string over the characters '0' and '1'.
using Bits = std::string;

bool is_bits(std::string_view s);

/// Bijective binary: 0 <-> "", 1 <-> "0", 2 <-> "1", 3 <-> "00", ...
/// (binary of n+1 with its leading 1 removed).
Bits bijective_binary(std::uint64_t n);
std::optional<std::uint64_t> bijective_value(std::string_view bits);

/// Self-delimiting code: every bit doubled, then the terminator "01".
Bits self_delimit(std::string_view bits);

/// <i>: the self-delimiting code of the bijective description of i.
Bits encode_index(std::uint64_t i);

/// Literal payload read by the catalog print machine: <|x|> followed by x.
Bits literal_payload(std::string_view x);

struct SelfDelimitedParse {
  enum class Status { Complete, Malformed, NeedMore };
  Status status;
  Bits value;           // decoded bits (valid when Complete)
  std::size_t consumed; // bits read, including the terminator
};

/// Decodes a self-delimited prefix of `stream`. A "10" pair is Malformed;
/// running out of input before the terminator is NeedMore.
SelfDelimitedParse parse_self_delimited(std::string_view stream);

}  // namespace revtm
