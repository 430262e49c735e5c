// include/advpost/seeds.hpp

// Copyright 2026  The advpost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVPOST_SEEDS_HPP_
#define ADVPOST_SEEDS_HPP_

#include <cstdint>
#include <string_view>

namespace advpost {

/// One splitmix64 step; a good scrambler for nearby integer seeds.
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr uint64_t Fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Independent sub-seed for a named stage or item.
constexpr uint64_t DeriveSeed(uint64_t global, std::string_view name) {
  return SplitMix64(global ^ Fnv1a64(name));
}

constexpr uint64_t DeriveSeed(uint64_t global, uint64_t index) {
  return SplitMix64(global ^ SplitMix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace advpost

#endif  // ADVPOST_SEEDS_HPP_
