// Copyright 2026 The matchbandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MATCHBANDIT_INDEX_SET_H_
#define MATCHBANDIT_INDEX_SET_H_

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace matchbandit {

// Players and arms are 0-based; a market holds at most this many of each.
inline constexpr int kMaxIndex = 64;

// Used both for "proposes to nobody" and "matched to nobody".
inline constexpr int kNone = -1;

// Small ordered set of indices backed by a 64-bit mask. The tag keeps player
// sets and arm sets from being mixed up.
template <typename Tag>
class IndexSet {
 public:
  constexpr IndexSet() = default;

  static constexpr IndexSet FromBits(uint64_t bits) {
    IndexSet s;
    s.bits_ = bits;
    return s;
  }
  static constexpr IndexSet All(int n) {
    return FromBits(n >= kMaxIndex ? ~uint64_t{0} : (uint64_t{1} << n) - 1);
  }
  static IndexSet Of(std::initializer_list<int> members) {
    IndexSet s;
    for (int m : members) s.Insert(m);
    return s;
  }
  static IndexSet Of(const std::vector<int>& members) {
    IndexSet s;
    for (int m : members) s.Insert(m);
    return s;
  }

  constexpr bool Contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr void Insert(int i) { bits_ |= uint64_t{1} << i; }
  constexpr void Erase(int i) { bits_ &= ~(uint64_t{1} << i); }
  constexpr IndexSet With(int i) const { return FromBits(bits_ | (uint64_t{1} << i)); }
  constexpr IndexSet Without(int i) const { return FromBits(bits_ & ~(uint64_t{1} << i)); }

  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr uint64_t bits() const { return bits_; }
  constexpr bool IsSubsetOf(IndexSet other) const { return (bits_ & ~other.bits_) == 0; }

  // Smallest member, or kNone.
  constexpr int First() const { return bits_ == 0 ? kNone : std::countr_zero(bits_); }
  // Smallest member strictly greater than i, or kNone.
  constexpr int NextAfter(int i) const {
    if (i + 1 >= kMaxIndex) return kNone;
    const uint64_t rest = i < 0 ? bits_ : bits_ & (~uint64_t{0} << (i + 1));
    return rest == 0 ? kNone : std::countr_zero(rest);
  }

  template <typename F>
  void ForEach(F&& f) const {
    for (uint64_t rest = bits_; rest != 0; rest &= rest - 1) f(std::countr_zero(rest));
  }
  std::vector<int> Members() const {
    std::vector<int> out;
    out.reserve(size());
    ForEach([&](int i) { out.push_back(i); });
    return out;
  }

  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return FromBits(a.bits_ | b.bits_); }
  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return FromBits(a.bits_ & b.bits_); }
  friend constexpr IndexSet operator-(IndexSet a, IndexSet b) { return FromBits(a.bits_ & ~b.bits_); }
  constexpr bool operator==(const IndexSet&) const = default;

 private:
  uint64_t bits_ = 0;
};

struct PlayerTag {};
struct ArmTag {};
using PlayerSet = IndexSet<PlayerTag>;
using ArmSet = IndexSet<ArmTag>;

// "{0,2,5}"
template <typename Tag>
std::string ToString(IndexSet<Tag> s) {
  std::string out = "{";
  bool first = true;
  s.ForEach([&](int i) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  });
  out += '}';
  return out;
}

}  // namespace matchbandit

#endif  // MATCHBANDIT_INDEX_SET_H_
