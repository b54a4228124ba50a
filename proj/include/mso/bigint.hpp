#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mso/common.hpp"

namespace mso {

// Unsigned arbitrary-precision integer, just large enough for census
// arithmetic: orbit counts reach 2^(2^m), so fixed-width types do not do.
// Little-endian 64-bit limbs, no leading zero limb.
class BigUint {
public:
  BigUint() = default;
  BigUint(std::uint64_t v) {
    if (v) limbs_.push_back(v);
  }

  static BigUint pow2(std::uint64_t bits) {
    BigUint r;
    r.limbs_.assign(bits / 64 + 1, 0);
    r.limbs_[bits / 64] = std::uint64_t{1} << (bits % 64);
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  bool fits_u64() const { return limbs_.size() <= 1; }
  std::uint64_t to_u64() const {
    require(fits_u64(), "BigUint: value does not fit in 64 bits");
    return limbs_.empty() ? 0 : limbs_[0];
  }

  int cmp(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size())
      return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (size_t i = limbs_.size(); i-- > 0;)
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    return 0;
  }
  bool operator==(const BigUint& o) const { return cmp(o) == 0; }
  bool operator<(const BigUint& o) const { return cmp(o) < 0; }
  bool operator<=(const BigUint& o) const { return cmp(o) <= 0; }
  bool operator>(const BigUint& o) const { return cmp(o) > 0; }

  BigUint& operator+=(const BigUint& o) {
    if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    unsigned __int128 carry = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
      carry += limbs_[i];
      if (i < o.limbs_.size()) carry += o.limbs_[i];
      limbs_[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
      if (!carry && i >= o.limbs_.size()) break;
    }
    if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
    return *this;
  }
  BigUint operator+(const BigUint& o) const {
    BigUint r = *this;
    r += o;
    return r;
  }

  BigUint& mul_small(std::uint64_t m) {
    if (m == 0) {
      limbs_.clear();
      return *this;
    }
    unsigned __int128 carry = 0;
    for (auto& limb : limbs_) {
      carry += static_cast<unsigned __int128>(limb) * m;
      limb = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    while (carry) {
      limbs_.push_back(static_cast<std::uint64_t>(carry));
      carry >>= 64;
    }
    return *this;
  }

  // Division by a small divisor; returns the remainder.
  std::uint64_t div_small(std::uint64_t d) {
    require(d != 0, "BigUint: division by zero");
    unsigned __int128 rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      rem = (rem << 64) | limbs_[i];
      limbs_[i] = static_cast<std::uint64_t>(rem / d);
      rem %= d;
    }
    trim();
    return static_cast<std::uint64_t>(rem);
  }

  BigUint operator*(const BigUint& o) const {
    if (is_zero() || o.is_zero()) return BigUint();
    BigUint r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      unsigned __int128 carry = 0;
      for (size_t j = 0; j < o.limbs_.size(); ++j) {
        carry += r.limbs_[i + j];
        carry += static_cast<unsigned __int128>(limbs_[i]) * o.limbs_[j];
        r.limbs_[i + j] = static_cast<std::uint64_t>(carry);
        carry >>= 64;
      }
      size_t k = i + o.limbs_.size();
      while (carry) {
        carry += r.limbs_[k];
        r.limbs_[k++] = static_cast<std::uint64_t>(carry);
        carry >>= 64;
      }
    }
    r.trim();
    return r;
  }

  static BigUint pow(std::uint64_t base, std::uint64_t exp) {
    BigUint r(1);
    for (std::uint64_t i = 0; i < exp; ++i) r.mul_small(base);
    return r;
  }

  static BigUint factorial(std::uint64_t n) {
    BigUint r(1);
    for (std::uint64_t i = 2; i <= n; ++i) r.mul_small(i);
    return r;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    BigUint tmp = *this;
    std::string out;
    while (!tmp.is_zero()) {
      std::uint64_t chunk = tmp.div_small(1'000'000'000'000'000'000ULL);
      std::string part = std::to_string(chunk);
      if (!tmp.is_zero()) part.insert(0, 18 - part.size(), '0');
      out.insert(0, part);
    }
    return out;
  }

private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint64_t> limbs_;
};

}  // namespace mso
