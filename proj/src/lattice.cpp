#include "congsub/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace congsub {

Vec3 Vec3::unit(Modulus mod, int i) {
  Vec3 v(mod);
  v.c_[static_cast<std::size_t>(i)] = mod.reduce(1);
  return v;
}

Vec3 Vec3::from_matrix(const Mat2& x) {
  if (x.trace() != 0) fail(ErrorKind::DomainViolation, x.to_string() + " is not traceless");
  return {x.modulus(), x(0, 1), x(0, 0), x(1, 0)};
}

int Vec3::valuation() const {
  int v = mod_.N();
  for (i64 x : c_) v = std::min(v, mod_.valuation(x));
  return v;
}

Vec3 Vec3::operator+(const Vec3& o) const {
  if (!(mod_ == o.mod_)) fail(ErrorKind::ModulusMismatch, "vector operands live in different rings");
  return {mod_, mod_.add(c_[0], o.c_[0]), mod_.add(c_[1], o.c_[1]), mod_.add(c_[2], o.c_[2])};
}

Vec3 Vec3::operator-(const Vec3& o) const {
  if (!(mod_ == o.mod_)) fail(ErrorKind::ModulusMismatch, "vector operands live in different rings");
  return {mod_, mod_.sub(c_[0], o.c_[0]), mod_.sub(c_[1], o.c_[1]), mod_.sub(c_[2], o.c_[2])};
}

Vec3 Vec3::scaled(i64 k) const {
  i64 s = mod_.reduce(k);
  return {mod_, mod_.mul(c_[0], s), mod_.mul(c_[1], s), mod_.mul(c_[2], s)};
}

Vec3 Vec3::reduced(const Modulus& target) const {
  if (target.p() != mod_.p() || target.N() > mod_.N())
    fail(ErrorKind::ModulusMismatch, "reduction target must share p and have lower precision");
  return {target, c_[0], c_[1], c_[2]};
}

Vec3 Vec3::lifted(const Modulus& target) const {
  if (target.p() != mod_.p() || target.N() < mod_.N())
    fail(ErrorKind::ModulusMismatch, "lift target must share p and have higher precision");
  return {target, c_[0], c_[1], c_[2]};
}

i64 Vec3::dot(const Vec3& o) const {
  return mod_.add(mod_.add(mod_.mul(c_[0], o.c_[0]), mod_.mul(c_[1], o.c_[1])), mod_.mul(c_[2], o.c_[2]));
}

std::string Vec3::to_string() const {
  std::ostringstream os;
  os << "(" << c_[0] << "," << c_[1] << "," << c_[2] << ")";
  return os.str();
}

const StructureConstants& StructureConstants::sl2() {
  static const StructureConstants table = [] {
    StructureConstants s{};
    // indices: 0 = e, 1 = h, 2 = f
    s.c[1][0] = {2, 0, 0};
    s.c[0][1] = {-2, 0, 0};
    s.c[1][2] = {0, 0, -2};
    s.c[2][1] = {0, 0, 2};
    s.c[0][2] = {0, 1, 0};
    s.c[2][0] = {0, -1, 0};
    if (!s.antisymmetric() || !s.satisfies_jacobi())
      fail(ErrorKind::PreconditionViolation, "sl(2) structure constants are inconsistent");
    return s;
  }();
  return table;
}

bool StructureConstants::antisymmetric() const {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (c[i][j][k] != -c[j][i][k]) return false;
  return true;
}

bool StructureConstants::satisfies_jacobi() const {
  // [x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]] = 0 over Z
  auto br = [&](int i, const std::array<int, 3>& v) {
    std::array<int, 3> out{};
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[k] += v[j] * c[i][j][k];
    return out;
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        auto a = br(i, c[j][k]);
        auto b = br(j, c[k][i]);
        auto d = br(k, c[i][j]);
        for (int t = 0; t < 3; ++t)
          if (a[t] + b[t] + d[t] != 0) return false;
      }
  return true;
}

Vec3 bracket(const Vec3& x, const Vec3& y) {
  const Modulus& mod = x.modulus();
  if (!(mod == y.modulus())) fail(ErrorKind::ModulusMismatch, "bracket operands live in different rings");
  const auto& s = StructureConstants::sl2();
  std::array<i64, 3> out{0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < 3; ++j) {
      if (y[j] == 0) continue;
      i64 xy = mod.mul(x[i], y[j]);
      for (int k = 0; k < 3; ++k) {
        int c = s.c[i][j][k];
        if (c != 0) out[k] = mod.add(out[k], mod.mul(xy, mod.reduce(c)));
      }
    }
  }
  return {mod, out[0], out[1], out[2]};
}

// ---------------------------------------------------------------------------

Mat3 Mat3::identity(Modulus mod) {
  Mat3 m(mod);
  for (int i = 0; i < 3; ++i) m.at(i, i) = mod.reduce(1);
  return m;
}

Mat3 Mat3::from_columns(std::span<const Vec3> cols) {
  if (cols.size() != 3) fail(ErrorKind::PreconditionViolation, "Mat3 needs exactly three columns");
  Mat3 m(cols[0].modulus());
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) m.at(r, c) = cols[static_cast<std::size_t>(c)][r];
  return m;
}

Vec3 Mat3::apply(const Vec3& v) const {
  std::array<i64, 3> out{0, 0, 0};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[r] = mod_.add(out[r], mod_.mul((*this)(r, c), v[c]));
  return {mod_, out[0], out[1], out[2]};
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 m(mod_);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      i64 s = 0;
      for (int k = 0; k < 3; ++k) s = mod_.add(s, mod_.mul((*this)(r, k), o(k, c)));
      m.at(r, c) = s;
    }
  return m;
}

i64 Mat3::det() const {
  const auto& m = mod_;
  auto a = [&](int r, int c) { return (*this)(r, c); };
  i64 t0 = m.mul(a(0, 0), m.sub(m.mul(a(1, 1), a(2, 2)), m.mul(a(1, 2), a(2, 1))));
  i64 t1 = m.mul(a(0, 1), m.sub(m.mul(a(1, 0), a(2, 2)), m.mul(a(1, 2), a(2, 0))));
  i64 t2 = m.mul(a(0, 2), m.sub(m.mul(a(1, 0), a(2, 1)), m.mul(a(1, 1), a(2, 0))));
  return m.add(m.sub(t0, t1), t2);
}

Mat3 Mat3::inverse() const {
  const auto& m = mod_;
  i64 di = m.inverse(det());
  Mat3 inv(mod_);
  auto a = [&](int r, int c) { return (*this)(r, c); };
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      // cofactor of (c, r)
      int r0 = (c + 1) % 3, r1 = (c + 2) % 3, c0 = (r + 1) % 3, c1 = (r + 2) % 3;
      i64 cof = m.sub(m.mul(a(r0, c0), a(r1, c1)), m.mul(a(r0, c1), a(r1, c0)));
      inv.at(r, c) = m.mul(cof, di);
    }
  return inv;
}

// ---------------------------------------------------------------------------

SmithForm smith_form(Modulus mod, std::span<const Vec3> generators) {
  const int N = mod.N();
  const std::size_t k = generators.size();
  // A is 3 x k, stored column-major as generator copies.
  std::vector<std::array<i64, 3>> cols;
  cols.reserve(k);
  for (const auto& g : generators) {
    if (!(g.modulus() == mod)) fail(ErrorKind::ModulusMismatch, "generator lives in a different ring");
    cols.push_back(g.raw());
  }
  auto A = [&](std::size_t r, std::size_t c) -> i64& { return cols[c][r]; };
  Mat3 uinv = Mat3::identity(mod);
  std::array<int, 3> alpha{N, N, N};

  for (std::size_t t = 0; t < 3; ++t) {
    int best = N;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < 3; ++i)
      for (std::size_t j = t; j < k; ++j) {
        int v = mod.valuation(A(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best >= N) break;
    if (bi != t) {
      for (std::size_t j = 0; j < k; ++j) std::swap(A(t, j), A(bi, j));
      for (int r = 0; r < 3; ++r) std::swap(uinv.at(r, static_cast<int>(t)), uinv.at(r, static_cast<int>(bi)));
    }
    if (bj != t) std::swap(cols[t], cols[bj]);

    const i64 pa = mod.power(best);
    const i64 unit_inv = mod.inverse(A(t, t) / pa);
    for (std::size_t i = t + 1; i < 3; ++i) {
      if (A(i, t) == 0) continue;
      i64 q = mod.mul(A(i, t) / pa, unit_inv);
      for (std::size_t j = t; j < k; ++j) A(i, j) = mod.sub(A(i, j), mod.mul(q, A(t, j)));
      // row_i -= q row_t  <=>  column t of U^{-1} += q column i
      for (int r = 0; r < 3; ++r)
        uinv.at(r, static_cast<int>(t)) =
            mod.add(uinv(r, static_cast<int>(t)), mod.mul(q, uinv(r, static_cast<int>(i))));
    }
    for (std::size_t j = t + 1; j < k; ++j) {
      if (A(t, j) == 0) continue;
      i64 q = mod.mul(A(t, j) / pa, unit_inv);
      for (std::size_t i = t; i < 3; ++i) A(i, j) = mod.sub(A(i, j), mod.mul(q, A(i, t)));
    }
    alpha[t] = best;
  }
  if (!mod.is_unit(uinv.det())) fail(ErrorKind::PrecisionExhausted, "adapted basis is not unimodular");
  return SmithForm{alpha, uinv, uinv.inverse()};
}

LieLattice LieLattice::span(Modulus mod, std::span<const Vec3> generators) {
  return LieLattice(mod, smith_form(mod, generators));
}

LieLattice LieLattice::from_columns(Modulus mod, std::span<const Vec3> columns) {
  LieLattice L = span(mod, columns);
  if (!L.full_rank())
    fail(ErrorKind::PrecisionExhausted, "lattice is not of full rank at precision " + std::to_string(mod.N()));
  return L;
}

LieLattice LieLattice::ambient(Modulus mod) { return scaled_ambient(mod, 0); }

LieLattice LieLattice::scaled_ambient(Modulus mod, int k) {
  i64 q = mod.power(k);
  std::array<Vec3, 3> g{Vec3::e(mod).scaled(q), Vec3::h(mod).scaled(q), Vec3::f(mod).scaled(q)};
  return span(mod, g);
}

int LieLattice::rank() const {
  return static_cast<int>(std::count_if(smith_.alpha.begin(), smith_.alpha.end(), [&](int a) { return a < mod_.N(); }));
}

std::vector<Vec3> LieLattice::basis() const {
  std::vector<Vec3> out;
  for (int i = 0; i < 3; ++i) {
    int a = smith_.alpha[static_cast<std::size_t>(i)];
    if (a < mod_.N()) out.push_back(adapted(i).scaled(mod_.power(a)));
  }
  return out;
}

bool LieLattice::contains(const Vec3& v, int m) const {
  if (m < 0 || m > mod_.N()) fail(ErrorKind::PrecisionExceeded, "membership exponent exceeds precision");
  if (!(v.modulus() == mod_)) fail(ErrorKind::ModulusMismatch, "vector lives in a different ring");
  Vec3 y = smith_.adapted_inverse.apply(v);
  for (int i = 0; i < 3; ++i) {
    int need = std::min(smith_.alpha[static_cast<std::size_t>(i)], m);
    if (mod_.valuation(y[i]) < need) return false;
  }
  return true;
}

bool LieLattice::contains(const LieLattice& other, int m) const {
  for (const auto& v : other.basis())
    if (!contains(v, m)) return false;
  return true;
}

LieLattice LieLattice::scaled(int k) const {
  std::vector<Vec3> gens;
  i64 q = mod_.power(std::min(k, mod_.N()));
  for (const auto& v : basis()) gens.push_back(v.scaled(q));
  if (gens.empty()) gens.push_back(Vec3(mod_));
  return span(mod_, gens);
}

LieLattice LieLattice::operator+(const LieLattice& o) const {
  std::vector<Vec3> gens = basis();
  for (const auto& v : o.basis()) gens.push_back(v);
  if (gens.empty()) gens.push_back(Vec3(mod_));
  return span(mod_, gens);
}

LieLattice LieLattice::lie_closure() const {
  LieLattice current = *this;
  for (;;) {
    std::vector<Vec3> gens = current.basis();
    const std::size_t r = gens.size();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) gens.push_back(bracket(gens[i], gens[j]));
    if (gens.empty()) return current;
    LieLattice next = span(mod_, gens);
    if (current.contains(next)) return current;
    current = next;
  }
}

std::string LieLattice::to_string() const {
  std::ostringstream os;
  os << "alpha=(" << smith_.alpha[0] << "," << smith_.alpha[1] << "," << smith_.alpha[2] << ") basis=";
  for (int i = 0; i < 3; ++i) os << adapted(i).to_string();
  return os.str();
}

int lattice_level(const LieLattice& L) {
  if (!L.full_rank()) fail(ErrorKind::PrecisionExhausted, "level is defined for full-rank lattices only");
  return L.divisors()[2];
}

LieLattice saturate(const LieLattice& L) {
  std::vector<Vec3> gens;
  for (int i = 0; i < 3; ++i)
    if (L.divisors()[static_cast<std::size_t>(i)] < L.modulus().N()) gens.push_back(L.adapted(i));
  if (gens.empty()) gens.push_back(Vec3(L.modulus()));
  return LieLattice::span(L.modulus(), gens);
}

LieLattice saturate(Modulus mod, std::span<const Vec3> generators) {
  return saturate(LieLattice::span(mod, generators));
}

bool is_subalgebra_mod(const LieLattice& L, int nu) {
  if (nu < 0 || nu > L.modulus().N()) fail(ErrorKind::PrecisionExceeded, "nu exceeds precision");
  auto gens = L.basis();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!L.contains(bracket(gens[i], gens[j]), nu)) return false;
  return true;
}

bool membership_mod(const LieLattice& L, const Vec3& v, int m) { return L.contains(v, m); }

int saturation_index_exponent(const LieLattice& L) {
  int s = 0;
  for (int a : L.divisors())
    if (a < L.modulus().N()) s += a;
  return s;
}

}  // namespace congsub
