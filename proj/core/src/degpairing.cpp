#include "xdq/degpairing.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "xdq/errors.hpp"

namespace xdq {

Int DegreeForm::total_scale() const {
  Int s = 1;
  for (const auto& st : scale_log) s *= st.factor;
  return s;
}

Int WeilDegree::value() const {
  if (!exact || candidates.size() != 1) throw InvariantViolation("degree is not known exactly");
  return candidates.front();
}

bool WeilDegree::compatible_with(Int degree) const {
  return std::any_of(candidates.begin(), candidates.end(), [&](Int c) { return c > 0 && degree % c == 0; });
}

namespace pairing {
namespace {

// sum_{m^2 | k} mu(m) a_{k/m^2}
Int twisted_coefficient(const Newform& f, Int k) {
  Int s = 0;
  for (Int m = 1; m * m <= k; ++m) {
    if (k % (m * m) != 0) continue;
    const int mu = nt::moebius(m);
    if (mu != 0) s += mu * f.an(k / (m * m));
  }
  return s;
}

}  // namespace

Int pairing_entry(const Newform& f, Int N, Int d1, Int d2) {
  const Int M = f.curve().conductor;
  if (M < 1 || N < 1 || N % M != 0)
    throw DomainError("conductor " + std::to_string(M) + " does not divide " + std::to_string(N));
  const Int q = N / M;
  if (d1 < 1 || d2 < 1 || q % d1 != 0 || q % d2 != 0) throw DomainError("d1 and d2 must divide N/M");
  if (!nt::is_squarefree(q) && std::gcd(q, M) != 1)
    throw NotApplicable("N/M = " + std::to_string(q) + " is neither squarefree nor coprime to M = " + std::to_string(M));

  const Int g = std::gcd(d1, d2);
  const Int l = d1 / g * d2;
  const Int a = nt::checked_mul(twisted_coefficient(f, d1 / g), twisted_coefficient(f, d2 / g));
  const Int num = nt::checked_mul(a, nt::psi_index(N));
  const Int den = nt::psi_index(M * (l / g));
  if (num % den != 0) throw InvariantViolation("pairing entry is not integral");
  return nt::checked_mul(num / den, f.curve().modular_degree);
}

DegreeForm gram_matrix(const Newform& f, Int N) {
  DegreeForm out;
  out.level = N;
  out.curve_label = f.curve().label;
  out.conductor = f.curve().conductor;
  if (out.conductor < 1 || N % out.conductor != 0)
    throw DomainError("conductor " + std::to_string(out.conductor) + " does not divide " + std::to_string(N));
  out.divisor_basis = nt::divisors(N / out.conductor);
  const std::size_t n = out.divisor_basis.size();
  out.gram.assign(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      out.gram[i][j] = out.gram[j][i] = pairing_entry(f, N, out.divisor_basis[i], out.divisor_basis[j]);
  return out;
}

DegreeForm scale_for_cover(DegreeForm form, Int delta_index) {
  if (delta_index < 1) throw DomainError("cover degree must be positive");
  form.gram = qf::scaled(form.gram, delta_index);
  form.scale_log.push_back({"cover", delta_index});
  return form;
}

DegreeForm scale_for_isogeny(DegreeForm form, Int psi_degree) {
  if (psi_degree < 1) throw DomainError("isogeny degree must be positive");
  form.gram = qf::scaled(form.gram, psi_degree);
  form.scale_log.push_back({"isogeny", psi_degree});
  return form;
}

Gram normalize_signs(Gram g) {
  for (std::size_t j = 1; j < g.size(); ++j) {
    if (g[0][j] <= 0) continue;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (k == j) continue;
      g[j][k] = -g[j][k];
      g[k][j] = -g[k][j];
    }
  }
  return g;
}

DegreeForm normalize_signs(DegreeForm form) {
  form.gram = normalize_signs(std::move(form.gram));
  return form;
}

WeilDegree strong_weil_degree_delta(const EllipticCurveRecord& e, const DeltaSubgroup& delta,
                                    std::span<const ShimuraRecord> records) {
  const Int N = delta.modulus;
  if (e.conductor != N)
    throw DomainError(e.label + " has conductor " + std::to_string(e.conductor) + ", not " + std::to_string(N));
  if (!e.optimal()) throw DomainError(e.label + " is not the optimal curve of its isogeny class");
  if (e.modular_degree < 1) throw DomainError(e.label + " has no modular degree");

  const Int index = units::index_in_units(delta);
  const Int top = nt::checked_mul(e.modular_degree, index);
  WeilDegree w;
  auto exact = [&](Int v, std::string why) {
    w.exact = true;
    w.candidates = {v};
    w.basis = std::move(why);
    return w;
  };

  if (index == 1) return exact(e.modular_degree, "full group: X_Delta(N) = X_0(N)");

  if (e.analytic_rank % 2 == 1) {
    if (N <= 800) return exact(top, "odd analytic rank, N <= 800: trivial kernel");
    return exact(top / std::gcd(top, Int{4}), "odd analytic rank: kernel inside E[2], numerator of d*index/4");
  }

  std::set<Int> orders;
  for (const auto& r : records)
    if (r.conductor == N && (r.curve_label.empty() || r.curve_label == e.label)) orders.insert(r.group_order);

  if (orders.empty() && N <= 800) return exact(top, "even analytic rank, N <= 800, no Shimura record: trivial kernel");

  if (orders.size() == 1) {
    const Int s = *orders.begin();
    if (s == 1) return exact(top, "Shimura record of order 1");
    if (delta.size() <= 2 && top % s == 0) return exact(top / s, "Delta = {±1}: kernel is E ∩ Σ(N)");
  }

  std::set<Int> cands;
  if (orders.empty()) {
    for (Int k = 1; k <= 16; ++k)
      if (top % k == 0) cands.insert(top / k);
    w.basis = "no Shimura data: kernel order at most 16";
  } else {
    for (Int s : orders)
      for (Int k : nt::divisors(s))
        if (top % k == 0) cands.insert(top / k);
    w.basis = "kernel order divides the tabulated #(E ∩ Σ(N))";
  }
  w.exact = cands.size() == 1;
  w.candidates.assign(cands.begin(), cands.end());
  return w;
}

bool hypothesis_flag_condM(Int N, const EllipticCurveRecord& e,
                           std::span<const std::pair<Int, std::string>> verified) {
  return std::any_of(verified.begin(), verified.end(),
                     [&](const auto& p) { return p.first == N && p.second == e.label; });
}

}  // namespace pairing
}  // namespace xdq
