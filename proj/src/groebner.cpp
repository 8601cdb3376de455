#include "cartier/groebner.hpp"

#include <algorithm>
#include <sstream>

namespace cartier {

namespace {

struct MTerm {
  Monomial mono;
  std::uint32_t pos;
  std::uint32_t coeff;
};
using MPoly = std::vector<MTerm>;

std::uint64_t masked_degree(const Monomial& m, std::uint32_t mask) {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (mask >> i & 1u) d += m.exp[i];
  return d;
}

struct Pair {
  std::size_t i, j;
  MTerm lcm;  // coeff unused
};

class Engine {
 public:
  Engine(const PrimeField& F, TermOrder ord, bool rank_one)
      : F_(F), ord_(ord), rank_one_(rank_one) {}

  int cmp(const MTerm& a, const MTerm& b) const {
    if (ord_.elim_mask) {
      auto da = masked_degree(a.mono, ord_.elim_mask), db = masked_degree(b.mono, ord_.elim_mask);
      if (da != db) return da < db ? -1 : 1;
    }
    if (a.pos != b.pos) return a.pos < b.pos ? 1 : -1;
    return ord_.compare_monomials(a.mono, b.mono);
  }

  MPoly from_vec(const Vec& v) const {
    MPoly f;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (const auto& t : v[i].terms())
        f.push_back(MTerm{t.mono, static_cast<std::uint32_t>(i), t.coeff});
    std::sort(f.begin(), f.end(), [&](const MTerm& a, const MTerm& b) { return cmp(a, b) > 0; });
    return f;
  }

  Vec to_vec(const MPoly& f, const Ring& ring, std::size_t rank) const {
    std::vector<std::vector<Term>> parts(rank);
    for (const auto& t : f) parts[t.pos].push_back(Term{t.mono, t.coeff});
    Vec v;
    v.reserve(rank);
    for (auto& p : parts) v.emplace_back(ring, std::move(p));
    return v;
  }

  // f[start..] - c * m * g
  MPoly sub_mul(const MPoly& f, std::size_t start, std::uint32_t c, const Monomial& m,
                const MPoly& g) const {
    MPoly out;
    out.reserve(f.size() - start + g.size());
    std::uint32_t nc = F_.neg(c);
    std::size_t i = start, j = 0;
    MTerm gt;
    auto load = [&](std::size_t k) {
      gt = MTerm{g[k].mono * m, g[k].pos, F_.mul(g[k].coeff, nc)};
    };
    if (j < g.size()) load(j);
    while (i < f.size() || j < g.size()) {
      int s = i == f.size() ? -1 : j == g.size() ? 1 : cmp(f[i], gt);
      if (s > 0) {
        out.push_back(f[i++]);
      } else if (s < 0) {
        out.push_back(gt);
        if (++j < g.size()) load(j);
      } else {
        std::uint32_t sum = F_.add(f[i].coeff, gt.coeff);
        if (sum) out.push_back(MTerm{f[i].mono, f[i].pos, sum});
        ++i;
        if (++j < g.size()) load(j);
      }
    }
    return out;
  }

  int find_reducer(const MTerm& t, const std::vector<MPoly>& G,
                   const std::vector<std::vector<std::size_t>>& by_pos) const {
    if (t.pos >= by_pos.size()) return -1;
    for (auto k : by_pos[t.pos])
      if (G[k][0].mono.divides(t.mono)) return static_cast<int>(k);
    return -1;
  }

  // Full reduction; reducers must be monic.
  MPoly reduce(MPoly f, const std::vector<MPoly>& G,
               const std::vector<std::vector<std::size_t>>& by_pos) const {
    MPoly r;
    std::size_t i = 0;
    while (i < f.size()) {
      int k = find_reducer(f[i], G, by_pos);
      if (k < 0) {
        r.push_back(f[i++]);
        continue;
      }
      const MPoly& g = G[k];
      f = sub_mul(f, i, f[i].coeff, f[i].mono.quotient(g[0].mono), g);
      i = 0;
    }
    return r;
  }

  void make_monic(MPoly& f) const {
    if (f.empty() || f[0].coeff == 1) return;
    std::uint32_t inv = F_.inv(f[0].coeff);
    for (auto& t : f) t.coeff = F_.mul(t.coeff, inv);
  }

  std::vector<MPoly> buchberger(std::vector<MPoly> input, std::size_t rank) {
    G_.clear();
    live_.clear();
    pairs_.clear();
    by_pos_.assign(rank, {});
    for (auto& f : input) {
      MPoly h = reduce(std::move(f), G_, by_pos_);
      if (h.empty()) continue;
      make_monic(h);
      add(std::move(h));
    }
    while (!pairs_.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pairs_.size(); ++k)
        if (cmp(pairs_[k].lcm, pairs_[best].lcm) < 0) best = k;
      Pair pr = pairs_[best];
      pairs_[best] = pairs_.back();
      pairs_.pop_back();
      MPoly h = reduce(spoly(pr), G_, by_pos_);
      if (h.empty()) continue;
      make_monic(h);
      add(std::move(h));
    }
    return interreduce();
  }

 private:
  MPoly spoly(const Pair& pr) const {
    const MPoly& a = G_[pr.i];
    const MPoly& b = G_[pr.j];
    MPoly left;
    left.reserve(a.size());
    Monomial ma = pr.lcm.mono.quotient(a[0].mono);
    for (const auto& t : a) left.push_back(MTerm{t.mono * ma, t.pos, t.coeff});
    return sub_mul(left, 0, 1, pr.lcm.mono.quotient(b[0].mono), b);
  }

  static bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (a.exp[i] && b.exp[i]) return false;
    return true;
  }

  // Gebauer-Moeller update for a new monic element h.
  void add(MPoly h) {
    const std::size_t k = G_.size();
    const MTerm lt = h[0];
    struct Cand {
      Pair pair;
      bool coprime;
      bool keep;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < k; ++i) {
      if (!live_[i] || G_[i][0].pos != lt.pos) continue;
      MTerm l{G_[i][0].mono.lcm(lt.mono), lt.pos, 0};
      cands.push_back({Pair{i, k, l}, rank_one_ && coprime(G_[i][0].mono, lt.mono), true});
    }
    // Chain criterion among the new pairs.
    for (auto& c : cands)
      for (const auto& d : cands)
        if (&c != &d && d.pair.lcm.mono.divides(c.pair.lcm.mono) &&
            !(d.pair.lcm.mono == c.pair.lcm.mono)) {
          c.keep = false;
          break;
        }
    // Equal lcms: keep one, or none if any of them is coprime.
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (!cands[a].keep) continue;
      bool any_coprime = cands[a].coprime;
      for (std::size_t b = a + 1; b < cands.size(); ++b)
        if (cands[b].keep && cands[b].pair.lcm.mono == cands[a].pair.lcm.mono) {
          any_coprime = any_coprime || cands[b].coprime;
          cands[b].keep = false;
        }
      if (any_coprime) cands[a].keep = false;
    }
    // Old pairs made redundant by h.
    std::vector<Pair> kept;
    kept.reserve(pairs_.size());
    for (const auto& pr : pairs_) {
      bool drop = false;
      if (pr.lcm.pos == lt.pos && lt.mono.divides(pr.lcm.mono)) {
        Monomial li = G_[pr.i][0].mono.lcm(lt.mono), lj = G_[pr.j][0].mono.lcm(lt.mono);
        drop = !(li == pr.lcm.mono) && !(lj == pr.lcm.mono);
      }
      if (!drop) kept.push_back(pr);
    }
    pairs_ = std::move(kept);
    for (const auto& c : cands)
      if (c.keep) pairs_.push_back(c.pair);
    for (std::size_t i = 0; i < k; ++i)
      if (live_[i] && G_[i][0].pos == lt.pos && lt.mono.divides(G_[i][0].mono)) live_[i] = false;
    G_.push_back(std::move(h));
    live_.push_back(true);
    rebuild_index();
  }

  void rebuild_index() {
    for (auto& v : by_pos_) v.clear();
    for (std::size_t i = 0; i < G_.size(); ++i)
      if (live_[i]) by_pos_[G_[i][0].pos].push_back(i);
  }

  std::vector<MPoly> interreduce() {
    std::vector<MPoly> basis;
    for (std::size_t i = 0; i < G_.size(); ++i)
      if (live_[i]) basis.push_back(std::move(G_[i]));
    // Live leads are already pairwise non-dividing.
    std::vector<std::vector<std::size_t>> idx(by_pos_.size());
    for (std::size_t i = 0; i < basis.size(); ++i) idx[basis[i][0].pos].push_back(i);
    std::vector<MPoly> out;
    out.reserve(basis.size());
    for (const auto& g : basis) {
      MPoly tail(g.begin() + 1, g.end());
      MPoly r = reduce(std::move(tail), basis, idx);
      MPoly full{g[0]};
      full.insert(full.end(), r.begin(), r.end());
      out.push_back(std::move(full));
    }
    std::sort(out.begin(), out.end(),
              [&](const MPoly& a, const MPoly& b) { return cmp(a[0], b[0]) > 0; });
    return out;
  }

  const PrimeField& F_;
  TermOrder ord_;
  bool rank_one_;
  std::vector<MPoly> G_;
  std::vector<bool> live_;
  std::vector<Pair> pairs_;
  std::vector<std::vector<std::size_t>> by_pos_;
};

}  // namespace

struct GBData {
  std::vector<MPoly> polys;
  std::vector<std::vector<std::size_t>> by_pos;
  std::vector<Vec> vecs;
};

int TermOrder::compare_monomials(const Monomial& a, const Monomial& b) const {
  if (mono == Mono::Lex) return lex_compare(a, b);
  auto da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = kMaxVars; i-- > 0;)
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? 1 : -1;
  return 0;
}

namespace {

std::shared_ptr<const GBData> compute_gb(const Ring& ring, std::size_t rank,
                                         const std::vector<Vec>& gens, const TermOrder& ord) {
  Engine eng(ring.field(), ord, rank == 1);
  std::vector<MPoly> input;
  input.reserve(gens.size());
  for (const auto& g : gens) {
    MPoly f = eng.from_vec(g);
    if (!f.empty()) input.push_back(std::move(f));
  }
  // Small leads first tends to keep intermediate expressions short.
  std::sort(input.begin(), input.end(),
            [&](const MPoly& a, const MPoly& b) { return eng.cmp(a[0], b[0]) < 0; });
  auto data = std::make_shared<GBData>();
  data->polys = eng.buchberger(std::move(input), rank);
  data->by_pos.assign(rank, {});
  for (std::size_t i = 0; i < data->polys.size(); ++i) {
    data->by_pos[data->polys[i][0].pos].push_back(i);
    data->vecs.push_back(eng.to_vec(data->polys[i], ring, rank));
  }
  return data;
}

void check_vec(const Ring& ring, std::size_t rank, const Vec& v, const char* where) {
  if (v.size() != rank)
    fail(ErrorCode::InvalidInput, std::string("vector of wrong length in ") + where);
  for (const auto& c : v) require_same_ring(ring, c.ring(), where);
}

}  // namespace

FreeSubmodule::FreeSubmodule(Ring ring, std::size_t rank, std::vector<Vec> gens)
    : ring_(std::move(ring)), rank_(rank), gens_(std::move(gens)),
      cache_(std::make_shared<Cache>()) {
  for (const auto& g : gens_) check_vec(ring_, rank_, g, "FreeSubmodule");
}

FreeSubmodule FreeSubmodule::whole(const Ring& ring, std::size_t rank) {
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < rank; ++i) gens.push_back(unit_vec(ring, rank, i));
  return FreeSubmodule(ring, rank, std::move(gens));
}

FreeSubmodule FreeSubmodule::ideal(const Ring& ring, const std::vector<Polynomial>& gens) {
  std::vector<Vec> vs;
  for (const auto& g : gens) vs.push_back(Vec{g});
  return FreeSubmodule(ring, 1, std::move(vs));
}

std::shared_ptr<const GBData> FreeSubmodule::gb_data() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->gb) cache_->gb = compute_gb(ring_, rank_, gens_, TermOrder::grevlex());
  return cache_->gb;
}

const std::vector<Vec>& FreeSubmodule::basis() const { return gb_data()->vecs; }

std::vector<Polynomial> FreeSubmodule::ideal_generators() const {
  std::vector<Polynomial> out;
  for (const auto& g : gens_) out.push_back(g.at(0));
  return out;
}

std::vector<std::string> FreeSubmodule::to_strings() const {
  std::vector<std::string> out;
  for (const auto& b : basis()) out.push_back(rank_ == 1 ? b[0].to_string() : vec_to_string(b));
  return out;
}

std::string FreeSubmodule::to_string() const {
  std::ostringstream os;
  os << '<';
  bool first = true;
  for (const auto& s : to_strings()) {
    os << (first ? "" : ", ") << s;
    first = false;
  }
  os << '>';
  return os.str();
}

QuotientPresentation::QuotientPresentation(FreeSubmodule numerator, FreeSubmodule denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  require_same_ring(num_.ring(), den_.ring(), "QuotientPresentation");
  if (num_.rank() != den_.rank())
    fail(ErrorCode::InvalidInput, "numerator and denominator ranks differ");
  if (!contains(num_, den_))
    fail(ErrorCode::NotSubmodule, "denominator is not contained in numerator");
}

bool QuotientPresentation::is_zero() const { return contains(den_, num_); }

Vec zero_vec(const Ring& ring, std::size_t rank) { return Vec(rank, Polynomial(ring)); }

Vec unit_vec(const Ring& ring, std::size_t rank, std::size_t i) {
  Vec v = zero_vec(ring, rank);
  v.at(i) = Polynomial::constant(ring, 1);
  return v;
}

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Polynomial& p) { return p.is_zero(); });
}

std::string vec_to_string(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "]";
}

Matrix identity_matrix(const Ring& ring, std::size_t n) {
  Matrix m(n, Vec(n, Polynomial(ring)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Polynomial::constant(ring, 1);
  return m;
}

Vec apply_matrix(const Matrix& m, const Vec& v) {
  Vec out;
  out.reserve(m.size());
  for (const auto& row : m) {
    if (row.size() != v.size()) fail(ErrorCode::InvalidInput, "matrix/vector size mismatch");
    Polynomial acc(v.empty() ? row.at(0).ring() : v[0].ring());
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!row[j].is_zero() && !v[j].is_zero()) acc += row[j] * v[j];
    out.push_back(std::move(acc));
  }
  return out;
}

Matrix matrix_product(const Matrix& a, const Matrix& b) {
  Matrix out;
  for (const auto& row : a) {
    Vec r;
    for (std::size_t j = 0; j < b.at(0).size(); ++j) {
      Polynomial acc(row.at(0).ring());
      for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * b.at(k).at(j);
      r.push_back(std::move(acc));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::size_t, Monomial>> leading_terms(const FreeSubmodule& W) {
  std::vector<std::pair<std::size_t, Monomial>> out;
  for (const auto& g : W.gb_data()->polys) out.emplace_back(g[0].pos, g[0].mono);
  return out;
}

std::vector<Vec> groebner_basis(const FreeSubmodule& W, const TermOrder& order) {
  if (order == TermOrder::grevlex()) return W.basis();
  return compute_gb(W.ring(), W.rank(), W.generators(), order)->vecs;
}

Vec normal_form(const Vec& v, const FreeSubmodule& W) {
  check_vec(W.ring(), W.rank(), v, "normal_form");
  auto data = W.gb_data();
  Engine eng(W.ring().field(), TermOrder::grevlex(), W.rank() == 1);
  return eng.to_vec(eng.reduce(eng.from_vec(v), data->polys, data->by_pos), W.ring(), W.rank());
}

Polynomial normal_form(const Polynomial& f, const FreeSubmodule& ideal) {
  return normal_form(Vec{f}, ideal).at(0);
}

bool member(const Vec& v, const FreeSubmodule& W) { return is_zero_vec(normal_form(v, W)); }

bool contains(const FreeSubmodule& W, const FreeSubmodule& V) {
  require_same_ring(W.ring(), V.ring(), "contains");
  if (W.rank() != V.rank()) fail(ErrorCode::InvalidInput, "rank mismatch in contains");
  // Prefer the cached basis of V if it exists; otherwise the raw generators.
  const auto& gens = V.generators().size() > 8 ? V.basis() : V.generators();
  return std::all_of(gens.begin(), gens.end(), [&](const Vec& v) { return member(v, W); });
}

bool equal(const FreeSubmodule& W, const FreeSubmodule& V) {
  require_same_ring(W.ring(), V.ring(), "equal");
  if (W.rank() != V.rank()) return false;
  return W.basis() == V.basis();
}

FreeSubmodule sum(const FreeSubmodule& a, const FreeSubmodule& b) {
  require_same_ring(a.ring(), b.ring(), "sum");
  if (a.rank() != b.rank()) fail(ErrorCode::InvalidInput, "rank mismatch in sum");
  auto gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return FreeSubmodule(a.ring(), a.rank(), std::move(gens));
}

FreeSubmodule scale(const FreeSubmodule& W, const Polynomial& f) {
  std::vector<Vec> gens;
  for (const auto& g : W.generators()) {
    Vec v;
    for (const auto& c : g) v.push_back(c * f);
    gens.push_back(std::move(v));
  }
  return FreeSubmodule(W.ring(), W.rank(), std::move(gens));
}

FreeSubmodule image(const Matrix& phi, const FreeSubmodule& W) {
  std::vector<Vec> gens;
  for (const auto& g : W.generators()) gens.push_back(apply_matrix(phi, g));
  return FreeSubmodule(W.ring(), phi.size(), std::move(gens));
}

namespace {

// Second blocks of the basis elements whose first `r` entries vanish.
FreeSubmodule lower_block(const FreeSubmodule& stacked, std::size_t r) {
  std::vector<Vec> out;
  for (const auto& b : stacked.basis()) {
    bool top_zero = true;
    for (std::size_t i = 0; i < r && top_zero; ++i) top_zero = b[i].is_zero();
    if (top_zero) out.emplace_back(b.begin() + r, b.end());
  }
  return FreeSubmodule(stacked.ring(), stacked.rank() - r, std::move(out));
}

}  // namespace

FreeSubmodule intersect(const FreeSubmodule& a, const FreeSubmodule& b) {
  require_same_ring(a.ring(), b.ring(), "intersect");
  const std::size_t r = a.rank();
  if (b.rank() != r) fail(ErrorCode::InvalidInput, "rank mismatch in intersect");
  std::vector<Vec> gens;
  for (const auto& g : a.generators()) {
    Vec v = g;
    v.insert(v.end(), g.begin(), g.end());
    gens.push_back(std::move(v));
  }
  for (const auto& g : b.generators()) {
    Vec v = g;
    auto z = zero_vec(a.ring(), r);
    v.insert(v.end(), z.begin(), z.end());
    gens.push_back(std::move(v));
  }
  return lower_block(FreeSubmodule(a.ring(), 2 * r, std::move(gens)), r);
}

FreeSubmodule preimage(const Matrix& phi, const FreeSubmodule& N, std::size_t source_rank) {
  const std::size_t r = N.rank();
  if (phi.size() != r) fail(ErrorCode::InvalidInput, "matrix rows do not match target rank");
  const Ring& ring = N.ring();
  std::vector<Vec> gens;
  for (std::size_t k = 0; k < source_rank; ++k) {
    Vec v;
    for (std::size_t i = 0; i < r; ++i) v.push_back(phi[i].at(k));
    auto e = unit_vec(ring, source_rank, k);
    v.insert(v.end(), e.begin(), e.end());
    gens.push_back(std::move(v));
  }
  for (const auto& g : N.generators()) {
    Vec v = g;
    auto z = zero_vec(ring, source_rank);
    v.insert(v.end(), z.begin(), z.end());
    gens.push_back(std::move(v));
  }
  return lower_block(FreeSubmodule(ring, r + source_rank, std::move(gens)), r);
}

FreeSubmodule colon(const FreeSubmodule& N, const Polynomial& f) {
  Matrix m = identity_matrix(N.ring(), N.rank());
  for (std::size_t i = 0; i < N.rank(); ++i) m[i][i] = f;
  return preimage(m, N, N.rank());
}

FreeSubmodule eliminate(const FreeSubmodule& W, const std::vector<std::size_t>& vars) {
  std::uint32_t mask = 0;
  for (auto v : vars) {
    if (v >= W.ring().arity()) fail(ErrorCode::InvalidInput, "eliminated variable out of range");
    mask |= 1u << v;
  }
  std::vector<Vec> out;
  for (const auto& b : groebner_basis(W, TermOrder::elimination(mask))) {
    bool free = true;
    for (const auto& c : b)
      for (const auto& t : c.terms())
        if (masked_degree(t.mono, mask)) free = false;
    if (free) out.push_back(b);
  }
  return FreeSubmodule(W.ring(), W.rank(), std::move(out));
}

FreeSubmodule remap(const FreeSubmodule& W, const Ring& target, const std::vector<int>& map) {
  std::vector<Vec> gens;
  for (const auto& g : W.generators()) {
    Vec v;
    for (const auto& c : g) v.push_back(c.remap(target, map));
    gens.push_back(std::move(v));
  }
  return FreeSubmodule(target, W.rank(), std::move(gens));
}

FreeSubmodule saturate(const FreeSubmodule& W, const Polynomial& h) {
  const Ring& R = W.ring();
  require_same_ring(R, h.ring(), "saturate");
  Ring Rt = R.with_variable(R.fresh_name("t"));
  std::vector<int> up(R.arity()), down(R.arity() + 1, -1);
  for (std::size_t i = 0; i < R.arity(); ++i) up[i] = down[i] = static_cast<int>(i);
  FreeSubmodule lifted = remap(W, Rt, up);
  auto gens = lifted.generators();
  Polynomial rel = Polynomial::constant(Rt, 1) -
                   Polynomial::variable(Rt, R.arity()) * h.remap(Rt, up);
  for (std::size_t i = 0; i < W.rank(); ++i) {
    auto v = zero_vec(Rt, W.rank());
    v[i] = rel;
    gens.push_back(std::move(v));
  }
  FreeSubmodule elim = eliminate(FreeSubmodule(Rt, W.rank(), std::move(gens)), {R.arity()});
  return remap(elim, R, down);
}

FreeSubmodule saturate_by_colons(const FreeSubmodule& W, const Polynomial& h) {
  FreeSubmodule cur = W;
  for (int k = 0; k < 256; ++k) {
    FreeSubmodule next = colon(cur, h);
    if (equal(next, cur)) return cur;
    cur = FreeSubmodule(next.ring(), next.rank(), next.basis());
  }
  throw StabilizationCapExceeded("saturation by colons did not stabilize");
}

}  // namespace cartier
