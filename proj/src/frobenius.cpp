#include "cartier/frobenius.hpp"

#include <cstdlib>
#include <map>

namespace cartier {

unsigned max_frobenius_level() {
  if (const char* env = std::getenv("CARTIER_MAX_E")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 64) return static_cast<unsigned>(v);
  }
  return 6;
}

void check_frobenius_level(unsigned e) {
  if (e > max_frobenius_level())
    throw StabilizationCapExceeded("Frobenius level " + std::to_string(e) +
                                   " exceeds the cap " + std::to_string(max_frobenius_level()));
}

FreeSubmodule bracket_power(const FreeSubmodule& W, unsigned e) {
  check_frobenius_level(e);
  const std::uint64_t q = prime_power(W.ring().p(), e);
  std::vector<Vec> gens;
  for (const auto& g : W.generators()) {
    Vec v;
    for (const auto& c : g) {
      // (sum c_a x^a)^q = sum c_a x^{qa} over F_p.
      std::vector<Term> ts;
      for (const auto& t : c.terms()) {
        Monomial m;
        for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = static_cast<std::uint32_t>(t.mono.exp[i] * q);
        ts.push_back(Term{m, t.coeff});
      }
      v.emplace_back(W.ring(), std::move(ts));
    }
    gens.push_back(std::move(v));
  }
  return FreeSubmodule(W.ring(), W.rank(), std::move(gens));
}

std::vector<Vec> vector_digits(const Vec& v, unsigned e) {
  if (v.empty()) return {};
  const Ring& R = v[0].ring();
  std::map<std::array<std::uint32_t, kMaxVars>, Vec> digits;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (auto& [a, d] : frobenius_digits(v[i], e)) {
      auto it = digits.find(a);
      if (it == digits.end()) it = digits.emplace(a, zero_vec(R, v.size())).first;
      it->second[i] = d;
    }
  }
  std::vector<Vec> out;
  for (auto& [a, d] : digits) out.push_back(std::move(d));
  return out;
}

FreeSubmodule frobenius_root(const FreeSubmodule& W, unsigned e) {
  check_frobenius_level(e);
  std::vector<Vec> gens;
  for (const auto& g : W.generators())
    for (auto& d : vector_digits(g, e)) gens.push_back(std::move(d));
  return FreeSubmodule(W.ring(), W.rank(), std::move(gens));
}

}  // namespace cartier
