#include "congsub/matrix.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace congsub {

int Mat2::valuation() const {
  int v = mod_.N();
  for (i64 x : e_) v = std::min(v, mod_.valuation(x));
  return v;
}

Mat2 Mat2::operator+(const Mat2& o) const {
  check(o);
  Mat2 r(mod_);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = mod_.add(e_[i], o.e_[i]);
  return r;
}

Mat2 Mat2::operator-(const Mat2& o) const {
  check(o);
  Mat2 r(mod_);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = mod_.sub(e_[i], o.e_[i]);
  return r;
}

Mat2 Mat2::operator*(const Mat2& o) const {
  check(o);
  const auto& a = e_;
  const auto& b = o.e_;
  Mat2 r(mod_);
  r.e_[0] = mod_.add(mod_.mul(a[0], b[0]), mod_.mul(a[1], b[2]));
  r.e_[1] = mod_.add(mod_.mul(a[0], b[1]), mod_.mul(a[1], b[3]));
  r.e_[2] = mod_.add(mod_.mul(a[2], b[0]), mod_.mul(a[3], b[2]));
  r.e_[3] = mod_.add(mod_.mul(a[2], b[1]), mod_.mul(a[3], b[3]));
  return r;
}

Mat2 Mat2::scaled(i64 k) const {
  i64 s = mod_.reduce(k);
  Mat2 r(mod_);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = mod_.mul(e_[i], s);
  return r;
}

Mat2 Mat2::pow(u64 e) const {
  Mat2 base = *this;
  Mat2 result = identity(mod_);
  while (e > 0) {
    if (e & 1U) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

Mat2 Mat2::inverse() const {
  i64 d = det();
  if (!mod_.is_unit(d)) fail(ErrorKind::NonUnit, "determinant " + std::to_string(d) + " is not a unit");
  i64 di = mod_.inverse(d);
  return {mod_, mod_.mul(e_[3], di), mod_.mul(mod_.neg(e_[1]), di), mod_.mul(mod_.neg(e_[2]), di),
          mod_.mul(e_[0], di)};
}

Mat2 Mat2::reduced(int precision) const { return reduced(mod_.truncated(precision)); }

Mat2 Mat2::reduced(const Modulus& target) const {
  if (target.p() != mod_.p() || target.N() > mod_.N())
    fail(ErrorKind::ModulusMismatch, "reduction target must share p and have lower precision");
  return {target, e_[0], e_[1], e_[2], e_[3]};
}

Mat2 Mat2::lifted(const Modulus& target) const {
  if (target.p() != mod_.p() || target.N() < mod_.N())
    fail(ErrorKind::ModulusMismatch, "lift target must share p and have higher precision");
  return {target, e_[0], e_[1], e_[2], e_[3]};
}

std::string Mat2::to_string() const {
  std::ostringstream os;
  os << "[[" << e_[0] << "," << e_[1] << "],[" << e_[2] << "," << e_[3] << "]]";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) { return os << m.to_string(); }

bool in_principal_congruence(const Mat2& g, int m) {
  const Modulus& mod = g.modulus();
  if (m < 0 || m > mod.N())
    fail(ErrorKind::PrecisionExceeded, "congruence level " + std::to_string(m) + " exceeds precision");
  return (g - Mat2::identity(mod)).valuation() >= m;
}

bool residually_unipotent(const Mat2& g) {
  Mat2 r = g.reduced(1);
  return r.pow(static_cast<u64>(g.modulus().p())).is_identity();
}

bool residually_nilpotent(const Mat2& x) {
  Mat2 r = x.reduced(1);
  return (r * r).is_zero();
}

Mat2 commutator(const Mat2& k, const Mat2& x) { return k * x * k.inverse() * x.inverse(); }

}  // namespace congsub
