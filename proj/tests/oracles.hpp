#pragma once

// Brute-force oracles shared by the unit tests and the acceptance binary.

#include <map>
#include <random>
#include <vector>

#include "xdq/ellcurve.hpp"
#include "xdq/qform.hpp"

namespace oracle {

using xdq::Gram;
using xdq::Int;

// every projective point of the reduced cubic, the singular one included
inline Int all_points(const xdq::EllipticCurveRecord& e, Int p) {
  auto m = [&](Int v) { return xdq::nt::mod(v, p); };
  Int count = 1;
  for (Int x = 0; x < p; ++x)
    for (Int y = 0; y < p; ++y) {
      const Int lhs = m(m(y * y) + m(m(e.a1) * x % p * y) + m(e.a3) * y);
      const Int rhs = m(m(m(x * x) * x) + m(e.a2) * m(x * x) + m(e.a4) * x + m(e.a6));
      count += lhs == rhs;
    }
  return count;
}

inline Int det(const Gram& g) {
  if (g.size() == 1) return g[0][0];
  if (g.size() == 2) return g[0][0] * g[1][1] - g[0][1] * g[1][0];
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

inline Gram minor(const Gram& g, std::size_t k) {
  Gram m;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == k) continue;
    m.emplace_back();
    for (std::size_t j = 0; j < g.size(); ++j)
      if (j != k) m.back().push_back(g[i][j]);
  }
  return m;
}

// value -> least witness with first nonzero coordinate positive, over every x with
// x_i^2 <= bound * (G^-1)_ii (dimension <= 3)
inline std::map<Int, std::vector<Int>> hypercube(const Gram& g, Int bound) {
  const std::size_t n = g.size();
  const Int D = det(g);
  std::vector<Int> box(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Int adj = n == 1 ? 1 : det(minor(g, i));
    Int r = 0;
    while ((r + 1) * (r + 1) * D <= bound * adj) ++r;
    box[i] = r;
  }
  std::map<Int, std::vector<Int>> out;
  std::vector<Int> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = -box[i];
  for (;;) {
    Int lead = 0;
    for (Int v : x)
      if (v != 0) {
        lead = v;
        break;
      }
    if (lead > 0) {
      const Int q = xdq::qf::evaluate(g, x);
      if (q <= bound) {
        auto [it, fresh] = out.emplace(q, x);
        if (!fresh && x < it->second) it->second = x;
      }
    }
    std::size_t i = 0;
    while (i < n && x[i] == box[i]) {
      x[i] = -box[i];
      ++i;
    }
    if (i == n) break;
    ++x[i];
  }
  return out;
}

inline Gram random_positive_definite(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    Gram g(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      g[i][i] = 1 + static_cast<Int>(rng() % 12);
      for (std::size_t j = 0; j < i; ++j) g[i][j] = g[j][i] = static_cast<Int>(rng() % 11) - 5;
    }
    if (xdq::qf::is_positive_definite(g)) return g;
  }
}

}  // namespace oracle
