// mbnspk/rng.hpp

// Copyright 2026  The mbnspk Authors

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

#ifndef MBNSPK_RNG_HPP_
#define MBNSPK_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace mbnspk {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a, used to turn stream names ("corpus", "ubm", ...) into tags.
constexpr std::uint64_t HashName(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives an independent sub-stream seed from a parent seed and a tag path,
/// e.g. StreamSeed(mbn_seed, {layer, clustering}). Order-sensitive.
constexpr std::uint64_t StreamSeed(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = Mix64(seed);
  for (std::uint64_t t : tags) h = Mix64(h ^ Mix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

constexpr std::uint64_t StreamSeed(std::uint64_t seed, std::string_view name) {
  return StreamSeed(seed, {HashName(name)});
}

/// k distinct integers from [0, n), uniformly, returned in increasing order.
std::vector<std::uint32_t> SampleSorted(Rng &rng, std::size_t n, std::size_t k);

}  // namespace mbnspk

#endif  // MBNSPK_RNG_HPP_
