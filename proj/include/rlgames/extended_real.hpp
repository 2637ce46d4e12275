// Copyright 2026 The rlgames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RLGAMES_EXTENDED_REAL_HPP_
#define RLGAMES_EXTENDED_REAL_HPP_

#include <stdexcept>
#include <string>

namespace rlgames {

// A real number or one of the two infinities. Infinite values never enter
// floating-point arithmetic; callers branch on the tag instead.
class ExtendedReal {
 public:
  enum class Tag { kFinite, kPosInf, kNegInf };

  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double value) : value_(value) {}  // NOLINT

  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Tag::kPosInf); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Tag::kNegInf); }

  constexpr Tag tag() const { return tag_; }
  constexpr bool finite() const { return tag_ == Tag::kFinite; }
  constexpr bool is_pos_inf() const { return tag_ == Tag::kPosInf; }
  constexpr bool is_neg_inf() const { return tag_ == Tag::kNegInf; }

  double value() const {
    if (!finite()) throw std::domain_error("ExtendedReal: value() of " + str());
    return value_;
  }

  std::string str() const {
    switch (tag_) {
      case Tag::kPosInf: return "+inf";
      case Tag::kNegInf: return "-inf";
      default: return std::to_string(value_);
    }
  }

  friend constexpr bool operator==(const ExtendedReal& a,
                                   const ExtendedReal& b) {
    return a.tag_ == b.tag_ && (a.tag_ != Tag::kFinite || a.value_ == b.value_);
  }

 private:
  constexpr explicit ExtendedReal(Tag tag) : tag_(tag) {}

  Tag tag_ = Tag::kFinite;
  double value_ = 0.0;
};

}  // namespace rlgames

#endif  // RLGAMES_EXTENDED_REAL_HPP_
