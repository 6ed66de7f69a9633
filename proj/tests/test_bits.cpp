#include <vector>

#include "doctest.h"
#include "revtm/bits.hpp"
#include "revtm/digest.hpp"

using namespace revtm;

namespace {

// n+1 in binary with the leading 1 dropped.
std::string bijective_oracle(std::uint64_t n) {
  std::string s;
  for (std::uint64_t v = n + 1; v > 0; v /= 2) s.insert(s.begin(), char('0' + v % 2));
  return s.substr(1);
}

}  // namespace

TEST_CASE("bijective binary matches the n+1 construction") {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    CHECK(bijective_binary(n) == bijective_oracle(n));
    CHECK(bijective_value(bijective_binary(n)) == n);
  }
  CHECK(bijective_binary(0).empty());
  CHECK(bijective_binary(3) == "00");
  CHECK_FALSE(bijective_value("012").has_value());
}

TEST_CASE("self-delimiting code") {
  CHECK(self_delimit("") == "01");
  CHECK(self_delimit("10") == "110001");
  CHECK(encode_index(0) == "01");
  CHECK(encode_index(2) == "1101");
  CHECK(literal_payload("01") == self_delimit(bijective_binary(2)) + "01");

  auto p = parse_self_delimited("11000111");
  CHECK(p.status == SelfDelimitedParse::Status::Complete);
  CHECK(p.value == "10");
  CHECK(p.consumed == 6);
  CHECK(parse_self_delimited("0010").status == SelfDelimitedParse::Status::Malformed);
  CHECK(parse_self_delimited("001").status == SelfDelimitedParse::Status::NeedMore);
  CHECK(parse_self_delimited("").status == SelfDelimitedParse::Status::NeedMore);
}

TEST_CASE("no self-delimited code is a proper prefix of another") {
  std::vector<Bits> codes;
  for (std::uint64_t n = 0; n < 200; ++n) codes.push_back(encode_index(n));
  for (const auto& a : codes) {
    for (const auto& b : codes) {
      if (a != b) CHECK(b.rfind(a, 0) != 0);
    }
  }
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
