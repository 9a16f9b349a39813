#include "xdq/qform.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <functional>

#include "xdq/errors.hpp"

namespace xdq::qf {
namespace {

using boost::multiprecision::cpp_rational;
__extension__ using i128 = __int128;

void require_square_symmetric(const Gram& g) {
  for (const auto& row : g)
    if (row.size() != g.size()) throw DomainError("Gram matrix is not square");
  if (!is_symmetric(g)) throw DomainError("Gram matrix is not symmetric");
}

double to_double(const cpp_rational& q) { return q.convert_to<double>(); }

}  // namespace

bool is_symmetric(const Gram& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[i].size() != g.size() || g[j].size() != g.size()) return false;
      if (g[i][j] != g[j][i]) return false;
    }
  return true;
}

bool is_positive_definite(const Gram& g) {
  require_square_symmetric(g);
  const std::size_t n = g.size();
  if (n > 8) throw DomainError("dimension above 8 is not supported");
  std::vector<std::vector<i128>> a(n, std::vector<i128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = g[i][j];
  // Bareiss: after step k, a[k][k] is the leading (k+1)x(k+1) minor.
  i128 prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return true;
}

Int evaluate(const Gram& g, std::span<const Int> x) {
  if (x.size() != g.size()) throw DomainError("vector length does not match the form");
  Int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += nt::checked_mul(nt::checked_mul(g[i][j], x[i]), x[j]);
  return s;
}

RepresentedValues represented_values(const Gram& g, Int bound) {
  if (bound < 1) throw DomainError("bound must be positive");
  if (!is_positive_definite(g)) throw DomainError("form is not positive definite");
  const std::size_t n = g.size();

  // Q(x) = sum_i d[i] (x_i + sum_{j>i} mu[i][j] x_j)^2
  std::vector<std::vector<cpp_rational>> a(n, std::vector<cpp_rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = g[i][j];
  std::vector<cpp_rational> d(n);
  std::vector<std::vector<cpp_rational>> mu(n, std::vector<cpp_rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a[i][i];
    for (std::size_t j = i + 1; j < n; ++j) mu[i][j] = a[i][j] / d[i];
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = i + 1; k < n; ++k) a[j][k] -= mu[i][j] * mu[i][k] * d[i];
  }

  RepresentedValues out;
  out.gram = g;
  out.bound = bound;
  std::vector<Int> x(n, 0);

  auto record = [&] {
    bool zero = true;
    for (Int v : x) zero = zero && v == 0;
    if (zero) return;
    const Int q = evaluate(g, x);
    if (q > bound) return;
    // normalise to first nonzero coordinate positive
    std::vector<Int> w = x;
    for (Int v : w) {
      if (v == 0) continue;
      if (v < 0)
        for (Int& u : w) u = -u;
      break;
    }
    auto [it, fresh] = out.witnesses.emplace(q, w);
    if (!fresh && w < it->second) it->second = w;
  };

  std::function<void(std::size_t, const cpp_rational&)> descend = [&](std::size_t level, const cpp_rational& budget) {
    const std::size_t i = level - 1;
    cpp_rational c = 0;
    for (std::size_t j = i + 1; j < n; ++j) c -= mu[i][j] * x[j];
    const double r = std::sqrt(std::max(0.0, to_double(budget / d[i])));
    const double cd = to_double(c);
    const Int lo = static_cast<Int>(std::floor(cd - r)) - 1;
    const Int hi = static_cast<Int>(std::ceil(cd + r)) + 1;
    for (Int v = lo; v <= hi; ++v) {
      const cpp_rational t = cpp_rational(v) - c;
      const cpp_rational used = d[i] * t * t;
      if (used > budget) continue;
      x[i] = v;
      if (i == 0)
        record();
      else
        descend(i, budget - used);
    }
    x[i] = 0;
  };
  if (n > 0) descend(n, cpp_rational(bound));

  for (const auto& [v, w] : out.witnesses) out.values.push_back(v);
  return out;
}

Int min_nonzero(const Gram& g) {
  if (g.empty()) throw DomainError("empty form");
  if (!is_positive_definite(g)) throw DomainError("form is not positive definite");
  Int bound = g[0][0];
  for (std::size_t i = 1; i < g.size(); ++i) bound = std::min(bound, g[i][i]);
  for (;; bound *= 2) {
    const auto rv = represented_values(g, bound);
    if (!rv.values.empty()) return rv.values.front();
  }
}

std::optional<std::vector<Int>> represents(const Gram& g, Int target) {
  if (target < 1) return std::nullopt;
  const auto rv = represented_values(g, target);
  if (auto it = rv.witnesses.find(target); it != rv.witnesses.end()) return it->second;
  return std::nullopt;
}

Gram scaled(const Gram& g, Int k) {
  Gram out = g;
  for (auto& row : out)
    for (Int& v : row) v = nt::checked_mul(v, k);
  return out;
}

Gram parse_gram(std::string_view text) {
  Gram g;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    std::string_view row = text.substr(pos, end - pos);
    pos = end + 1;
    std::vector<Int> r;
    std::size_t p = 0;
    while (p <= row.size()) {
      const std::size_t e = std::min(row.find(',', p), row.size());
      std::string_view tok = row.substr(p, e - p);
      p = e + 1;
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      if (tok.empty()) continue;
      Int v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw DomainError("cannot parse Gram entry '" + std::string(tok) + "'");
      r.push_back(v);
    }
    if (!r.empty()) g.push_back(std::move(r));
  }
  require_square_symmetric(g);
  return g;
}

std::string format_matrix(const Gram& g) {
  std::string out = "[";
  for (std::size_t i = 0; i < g.size(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < g[i].size(); ++j) out += (j ? "," : "") + std::to_string(g[i][j]);
    out += "]";
  }
  return out + "]";
}

std::string format_form(const Gram& g) {
  static const char* names[] = {"x", "y", "z", "w"};
  auto var = [](std::size_t i) { return i < 4 ? std::string(names[i]) : "x" + std::to_string(i + 1); };
  std::string out;
  auto term = [&](Int coef, const std::string& mono) {
    if (coef == 0) return;
    if (coef < 0)
      out += "-";
    else if (!out.empty())
      out += "+";
    const Int a = coef < 0 ? -coef : coef;
    if (a != 1) out += std::to_string(a);
    out += mono;
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    term(g[i][i], var(i) + "^2");
    for (std::size_t j = i + 1; j < g.size(); ++j) term(2 * g[i][j], var(i) + var(j));
  }
  return out.empty() ? "0" : out;
}

}  // namespace xdq::qf
