#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mso/common.hpp"

namespace mso::gf {

using Vec = std::vector<std::uint8_t>;
using Mat = std::vector<Vec>;

inline bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

inline void check_prime(int q) {
  require(is_prime(q), "field order " + std::to_string(q) + " is not prime");
}

inline int add(int a, int b, int q) { return (a + b) % q; }
inline int sub(int a, int b, int q) { return (a - b % q + q) % q; }
inline int mul(int a, int b, int q) { return (a * b) % q; }

inline int inv(int a, int q) {
  require(a % q != 0, "division by zero in GF(" + std::to_string(q) + ")");
  int r = 1, base = a % q, e = q - 2;  // Fermat: a^(q-2) = a^-1 for prime q
  while (e) {
    if (e & 1) r = r * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return r;
}

// In-place row reduction to reduced echelon form; returns pivot columns.
inline std::vector<int> rref(Mat& m, int q) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  size_t cols = m[0].size();
  size_t row = 0;
  for (size_t col = 0; col < cols && row < m.size(); ++col) {
    size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    int scale = inv(m[row][col], q);
    for (auto& x : m[row]) x = static_cast<std::uint8_t>(x * scale % q);
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      int f = m[r][col];
      for (size_t c = 0; c < cols; ++c)
        m[r][c] = static_cast<std::uint8_t>(sub(m[r][c], mul(f, m[row][c], q), q));
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  m.resize(row);
  return pivots;
}

inline int rank(Mat rows, int q) { return static_cast<int>(rref(rows, q).size()); }

inline bool in_row_space(Mat rows, const Vec& v, int q) {
  int before = rank(rows, q);
  rows.push_back(v);
  return rank(std::move(rows), q) == before;
}

// Basis of { x : m * x = 0 }, with m acting on column vectors of length
// m[0].size().  Rows of the result are the kernel basis vectors.
inline Mat nullspace(Mat m, int q, size_t cols) {
  for (const auto& r : m) require(r.size() == cols, "nullspace: ragged matrix");
  std::vector<int> pivots = rref(m, q);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  Mat basis;
  for (size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec x(cols, 0);
    x[free] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) {
      // pivot row i: x[pivots[i]] + sum over free columns = 0
      x[pivots[i]] = static_cast<std::uint8_t>(sub(0, m[i][free], q));
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

// Basis of { x in GF(q)^n : sum_i x_i * vectors[i] = 0 }: the linear
// dependencies among the given vectors.
inline Mat null_combinations(const Mat& vectors, int q) {
  size_t n = vectors.size();
  size_t d = n ? vectors[0].size() : 0;
  Mat m(d, Vec(n, 0));  // columns are the vectors
  for (size_t i = 0; i < n; ++i) {
    require(vectors[i].size() == d, "null_combinations: ragged vector list");
    for (size_t r = 0; r < d; ++r) m[r][i] = vectors[i][r];
  }
  return nullspace(std::move(m), q, n);
}

// Unique coefficients expressing `target` in the given independent basis,
// or nullopt when target lies outside its span.
inline std::optional<Vec> express(const Mat& basis, const Vec& target, int q) {
  size_t d = target.size();
  Mat m(d, Vec(basis.size() + 1, 0));
  for (size_t i = 0; i < basis.size(); ++i) {
    require(basis[i].size() == d, "express: dimension mismatch");
    for (size_t r = 0; r < d; ++r) m[r][i] = basis[i][r];
  }
  for (size_t r = 0; r < d; ++r) m[r][basis.size()] = target[r];
  std::vector<int> pivots = rref(m, q);
  Vec coeff(basis.size(), 0);
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == static_cast<int>(basis.size())) return std::nullopt;
    coeff[pivots[i]] = m[i][basis.size()];
  }
  return coeff;
}

// Zassenhaus: basis of the intersection of two row spaces.
inline Mat intersect_row_spaces(const Mat& a, const Mat& b, int q) {
  size_t d = a.empty() ? (b.empty() ? 0 : b[0].size()) : a[0].size();
  Mat block;
  for (const auto& r : a) {
    require(r.size() == d, "intersect_row_spaces: dimension mismatch");
    Vec row(2 * d, 0);
    for (size_t i = 0; i < d; ++i) row[i] = row[d + i] = r[i];
    block.push_back(std::move(row));
  }
  for (const auto& r : b) {
    require(r.size() == d, "intersect_row_spaces: dimension mismatch");
    Vec row(2 * d, 0);
    for (size_t i = 0; i < d; ++i) row[i] = r[i];
    block.push_back(std::move(row));
  }
  rref(block, q);
  Mat out;
  for (const auto& row : block) {
    bool left_zero = true;
    for (size_t i = 0; i < d && left_zero; ++i) left_zero = row[i] == 0;
    if (!left_zero) continue;
    Vec right(row.begin() + d, row.end());
    bool right_zero = true;
    for (auto x : right)
      if (x) right_zero = false;
    if (!right_zero) out.push_back(std::move(right));
  }
  return out;
}

}  // namespace mso::gf
