#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ccdq {

// Basis-index conventions used throughout:
//   * qubit/asset i lives at bit i of a basis index (qubit 0 = least
//     significant bit),
//   * the text form of a bitstring lists asset 0 first, so "1000" denotes
//     the index 0b0001.

inline int popcount64(std::uint64_t x) { return std::popcount(x); }

// Exact binomial coefficient, saturating at UINT64_MAX on overflow.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (acc > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

// Smallest index of the given Hamming weight.
inline std::uint64_t lowest_weight_index(int w) {
  return w == 0 ? 0 : ((std::uint64_t{1} << w) - 1);
}

// Next larger index with the same Hamming weight (Gosper's hack).
// Caller is responsible for stopping before the range runs out.
inline std::uint64_t next_same_weight(std::uint64_t v) {
  std::uint64_t c = v & (~v + 1);
  std::uint64_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

inline std::string index_to_bits(std::uint64_t x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((x >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

inline std::uint64_t bits_to_index(const std::string& s) {
  if (s.size() > 64) throw std::invalid_argument("bitstring longer than 64");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      x |= std::uint64_t{1} << i;
    else if (s[i] != '0')
      throw std::invalid_argument("bitstring must contain only 0/1");
  }
  return x;
}

// Order of the text form: asset 0 is the leftmost character, so ties between
// equal-cost bitstrings resolve toward the string that flips to '1' later.
inline bool lex_less(std::uint64_t a, std::uint64_t b, int n) {
  for (int i = 0; i < n; ++i) {
    int ba = static_cast<int>((a >> i) & 1);
    int bb = static_cast<int>((b >> i) & 1);
    if (ba != bb) return ba < bb;
  }
  return false;
}

}  // namespace ccdq
