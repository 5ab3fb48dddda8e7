#include "qmut/cyclo.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace qmut {

namespace {

using ZPoly = std::vector<mpz_class>;  // coefficients, lowest degree first
using QPoly = std::vector<mpq_class>;

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  ZPoly r(a.size() + b.size() - 1, mpz_class(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Exact division by a monic divisor; throws if a remainder survives.
ZPoly zdiv_exact(ZPoly num, const ZPoly& den) {
  if (den.empty() || den.back() != 1)
    throw std::logic_error("zdiv_exact: divisor not monic");
  int dn = (int)num.size() - 1, dd = (int)den.size() - 1;
  ZPoly quot(dn - dd + 1, mpz_class(0));
  for (int i = dn; i >= dd; --i) {
    mpz_class lead = num[i];
    if (lead == 0) continue;
    quot[i - dd] = lead;
    for (int j = 0; j <= dd; ++j) num[i - dd + j] -= lead * den[j];
  }
  for (const auto& c : num)
    if (c != 0) throw std::logic_error("zdiv_exact: inexact division");
  return quot;
}

// Cyclotomic polynomial by exact division:
//   Phi_m(x) = (x^m - 1) / prod_{d | m, d < m} Phi_d(x)
const ZPoly& cyclotomic(long m) {
  static std::mutex mu;
  static std::map<long, ZPoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  struct Rec {
    std::map<long, ZPoly>& c;
    const ZPoly& get(long m) {
      auto it = c.find(m);
      if (it != c.end()) return it->second;
      ZPoly num(m + 1, mpz_class(0));
      num[0] = -1;
      num[m] = 1;
      for (long d = 1; d < m; ++d)
        if (m % d == 0) num = zdiv_exact(std::move(num), get(d));
      return c.emplace(m, std::move(num)).first->second;
    }
  } rec{cache};
  return rec.get(m);
}

// Minimal polynomial of 2cos(pi/N) for N >= 2, obtained by folding the
// palindrome Phi_{2N}(z) = z^m * psi(z + 1/z):  subtract multiples of
// z^{m-k} (z^2+1)^k from the top down and check that nothing remains.
ZPoly compute_psi(long N) {
  if (N == 1) return {mpz_class(2), mpz_class(1)};  // x + 2, root -2
  ZPoly P = cyclotomic(2 * N);
  int deg = (int)P.size() - 1;
  if (deg % 2 != 0) throw std::logic_error("compute_psi: odd degree");
  int m = deg / 2;
  std::vector<ZPoly> pw(m + 1);
  pw[0] = {mpz_class(1)};
  const ZPoly z2p1 = {mpz_class(1), mpz_class(0), mpz_class(1)};
  for (int k = 1; k <= m; ++k) pw[k] = zmul(pw[k - 1], z2p1);
  ZPoly psi(m + 1);
  for (int k = m; k >= 0; --k) {
    mpz_class a = P[m + k];
    psi[k] = a;
    if (a != 0)
      for (size_t j = 0; j < pw[k].size(); ++j) P[m - k + j] -= a * pw[k][j];
  }
  for (const auto& c : P)
    if (c != 0) throw std::logic_error("compute_psi: fold left a remainder");
  return psi;
}

// Values 2cos(pi*k/N) for k = 0..N as reduced coefficient vectors, via the
// three-term recurrence D_0 = 2, D_1 = c, D_{k+1} = c*D_k - D_{k-1}.
const std::vector<QPoly>& dickson_table(long N) {
  static std::mutex mu;
  static std::map<long, std::vector<QPoly>> cache;
  minimal_poly(N);  // warm the other cache outside our lock
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  std::vector<CycloReal> d;
  d.push_back(CycloReal::from_int(2, N));
  d.push_back(CycloReal::generator(N));
  for (long k = 2; k <= N; ++k) d.push_back(d[1] * d[k - 1] - d[k - 2]);
  std::vector<QPoly> tab;
  tab.reserve(d.size());
  for (const auto& v : d) tab.push_back(v.coeffs());
  return cache.emplace(N, std::move(tab)).first->second;
}

int qpoly_deg(const QPoly& p) {
  for (int i = (int)p.size() - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

// Remainder of a by b over Q, b nonzero; also accumulates the quotient.
QPoly qpoly_divmod(QPoly a, const QPoly& b, QPoly* quot) {
  int db = qpoly_deg(b);
  int da = qpoly_deg(a);
  if (quot) quot->assign(std::max(da - db + 1, 1), mpq_class(0));
  while (da >= db && da >= 0) {
    mpq_class f = a[da] / b[db];
    if (quot) (*quot)[da - db] = f;
    for (int j = 0; j <= db; ++j) a[da - db + j] -= f * b[j];
    da = qpoly_deg(a);
  }
  return a;
}

QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, mpq_class(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

QPoly qpoly_sub(QPoly a, const QPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

struct MpfrVal {
  mpfr_t v;
  explicit MpfrVal(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~MpfrVal() { mpfr_clear(v); }
  MpfrVal(const MpfrVal&) = delete;
  MpfrVal& operator=(const MpfrVal&) = delete;
};

// Sign attempt at a fixed precision: -1 / +1, or 2 when the enclosing
// interval still straddles zero.
int try_sign(const std::vector<mpq_class>& a, long N, mpfr_prec_t prec) {
  MpfrVal pil(prec), pih(prec), tl(prec), th(prec), cl(prec), ch(prec);
  mpfr_const_pi(pil.v, MPFR_RNDD);
  mpfr_const_pi(pih.v, MPFR_RNDU);
  mpfr_div_si(tl.v, pil.v, N, MPFR_RNDD);
  mpfr_div_si(th.v, pih.v, N, MPFR_RNDU);
  // cos decreases on [0, pi]
  mpfr_cos(cl.v, th.v, MPFR_RNDD);
  mpfr_mul_2ui(cl.v, cl.v, 1, MPFR_RNDD);
  mpfr_cos(ch.v, tl.v, MPFR_RNDU);
  mpfr_mul_2ui(ch.v, ch.v, 1, MPFR_RNDU);

  MpfrVal rl(prec), rh(prec), p(prec), nl(prec), nh(prec), q(prec);
  int d = (int)a.size();
  mpfr_set_q(rl.v, a[d - 1].get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(rh.v, a[d - 1].get_mpq_t(), MPFR_RNDU);
  for (int i = d - 2; i >= 0; --i) {
    // interval product [rl,rh] * [cl,ch]
    mpfr_mul(p.v, rl.v, cl.v, MPFR_RNDD);
    mpfr_set(nl.v, p.v, MPFR_RNDD);
    mpfr_mul(p.v, rl.v, ch.v, MPFR_RNDD);
    mpfr_min(nl.v, nl.v, p.v, MPFR_RNDD);
    mpfr_mul(p.v, rh.v, cl.v, MPFR_RNDD);
    mpfr_min(nl.v, nl.v, p.v, MPFR_RNDD);
    mpfr_mul(p.v, rh.v, ch.v, MPFR_RNDD);
    mpfr_min(nl.v, nl.v, p.v, MPFR_RNDD);

    mpfr_mul(p.v, rl.v, cl.v, MPFR_RNDU);
    mpfr_set(nh.v, p.v, MPFR_RNDU);
    mpfr_mul(p.v, rl.v, ch.v, MPFR_RNDU);
    mpfr_max(nh.v, nh.v, p.v, MPFR_RNDU);
    mpfr_mul(p.v, rh.v, cl.v, MPFR_RNDU);
    mpfr_max(nh.v, nh.v, p.v, MPFR_RNDU);
    mpfr_mul(p.v, rh.v, ch.v, MPFR_RNDU);
    mpfr_max(nh.v, nh.v, p.v, MPFR_RNDU);

    mpfr_set_q(q.v, a[i].get_mpq_t(), MPFR_RNDD);
    mpfr_add(rl.v, nl.v, q.v, MPFR_RNDD);
    mpfr_set_q(q.v, a[i].get_mpq_t(), MPFR_RNDU);
    mpfr_add(rh.v, nh.v, q.v, MPFR_RNDU);
  }
  if (mpfr_sgn(rl.v) > 0) return 1;
  if (mpfr_sgn(rh.v) < 0) return -1;
  return 2;
}

}  // namespace

// ---------------------------------------------------------------- AngleLabel

AngleLabel::AngleLabel(long num_, long den_) : num(num_), den(den_) {
  if (den <= 0) throw std::invalid_argument("angle label: denominator <= 0");
  if (num < 0 || num > den)
    throw std::invalid_argument("angle label: numerator out of [0, den]");
  long g = std::gcd(num, den);
  if (g == 0) g = 1;  // num == 0 with den > 0: gcd(0, den) = den
  num /= g;
  den /= g;
}

double AngleLabel::approx() const {
  return 2.0 * std::cos(M_PI * (double)num / (double)den);
}

std::string AngleLabel::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

AngleLabel AngleLabel::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("angle label: expected \"num/den\", got \"" +
                                text + "\"");
  size_t p1 = 0, p2 = 0;
  long n = std::stol(text.substr(0, slash), &p1);
  long d = std::stol(text.substr(slash + 1), &p2);
  if (p1 != slash || p2 != text.size() - slash - 1)
    throw std::invalid_argument("angle label: trailing characters in \"" +
                                text + "\"");
  return AngleLabel(n, d);
}

// ----------------------------------------------------------- minimal_poly

const std::vector<mpz_class>& minimal_poly(long N) {
  if (N < 1) throw std::invalid_argument("minimal_poly: N < 1");
  static std::mutex mu;
  static std::map<long, ZPoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  return cache.emplace(N, compute_psi(N)).first->second;
}

int minimal_poly_degree(long N) { return (int)minimal_poly(N).size() - 1; }

// -------------------------------------------------------------- CycloReal

CycloReal::CycloReal(long ambient, std::vector<mpq_class> coeffs)
    : ambient_(ambient), coeffs_(std::move(coeffs)) {
  reduce();
}

void CycloReal::reduce() {
  const ZPoly& psi = minimal_poly(ambient_);
  int deg = (int)psi.size() - 1;
  for (int i = (int)coeffs_.size() - 1; i >= deg; --i) {
    mpq_class lead = coeffs_[i];
    if (lead == 0) continue;
    for (int j = 0; j <= deg; ++j)
      coeffs_[i - deg + j] -= lead * mpq_class(psi[j]);
  }
  coeffs_.resize(deg, mpq_class(0));
}

CycloReal CycloReal::zero(long ambient) {
  return CycloReal(ambient, {mpq_class(0)});
}

CycloReal CycloReal::from_rational(const mpq_class& q, long ambient) {
  return CycloReal(ambient, {q});
}

CycloReal CycloReal::from_int(long v, long ambient) {
  return CycloReal(ambient, {mpq_class(v)});
}

CycloReal CycloReal::generator(long ambient) {
  return CycloReal(ambient, {mpq_class(0), mpq_class(1)});
}

CycloReal CycloReal::from_label(const AngleLabel& lbl, long ambient) {
  // Rational cosine values exist in every ambient.
  if (lbl.den == 1) return from_int(lbl.num == 0 ? 2 : -2, ambient);
  if (lbl.den == 2) return zero(ambient);
  if (lbl.den == 3) return from_int(lbl.num == 1 ? 1 : -1, ambient);
  if (ambient % lbl.den != 0)
    throw std::invalid_argument("from_label: denominator " +
                                std::to_string(lbl.den) +
                                " does not divide ambient " +
                                std::to_string(ambient));
  long k = lbl.num * (ambient / lbl.den);
  return CycloReal(ambient, dickson_table(ambient)[k]);
}

bool CycloReal::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycloReal::is_rational() const {
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

int CycloReal::sign() const {
  if (sign_cache_ != 2) return sign_cache_;
  if (is_rational()) return sign_cache_ = sgn(coeffs_[0]);
  for (mpfr_prec_t prec = 64; prec <= (1 << 14); prec *= 2) {
    int s = try_sign(coeffs_, ambient_, prec);
    if (s != 2) return sign_cache_ = s;
  }
  throw std::logic_error("sign: precision cap exceeded for a nonzero value");
}

CycloReal CycloReal::abs() const { return sign() < 0 ? -*this : *this; }

std::optional<AngleLabel> CycloReal::to_label() const {
  if (is_rational()) {
    const mpq_class& q = coeffs_[0];
    if (q == 2) return AngleLabel(0, 1);
    if (q == 1) return AngleLabel(1, 3);
    if (q == 0) return AngleLabel(1, 2);
    if (q == -1) return AngleLabel(2, 3);
    if (q == -2) return AngleLabel(1, 1);
    return std::nullopt;
  }
  const auto& tab = dickson_table(ambient_);
  for (long k = 1; k < ambient_; ++k)
    if (coeffs_ == tab[k]) return AngleLabel(k, ambient_);
  return std::nullopt;
}

CycloReal CycloReal::lifted(long new_ambient) const {
  if (new_ambient == ambient_) return *this;
  if (new_ambient % ambient_ != 0)
    throw std::invalid_argument("lifted: new ambient not a multiple");
  // 2cos(pi/N) = D_{N'/N}(2cos(pi/N')) evaluated by Horner in the new ring.
  CycloReal g(new_ambient, dickson_table(new_ambient)[new_ambient / ambient_]);
  CycloReal r = zero(new_ambient);
  for (int i = (int)coeffs_.size() - 1; i >= 0; --i) {
    r = r * g;
    r.coeffs_[0] += coeffs_[i];
    r.sign_cache_ = 2;
  }
  r.sign_cache_ = sign_cache_;  // lifting preserves the value
  return r;
}

CycloReal CycloReal::operator-() const {
  CycloReal r = *this;
  for (auto& c : r.coeffs_) c = -c;
  if (r.sign_cache_ != 2) r.sign_cache_ = -r.sign_cache_;
  return r;
}

CycloReal operator+(const CycloReal& a, const CycloReal& b) {
  if (a.ambient_ != b.ambient_) {
    auto [x, y] = aligned(a, b);
    return x + y;
  }
  CycloReal r = a;
  r.sign_cache_ = 2;
  for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
  return r;
}

CycloReal operator-(const CycloReal& a, const CycloReal& b) {
  if (a.ambient_ != b.ambient_) {
    auto [x, y] = aligned(a, b);
    return x - y;
  }
  CycloReal r = a;
  r.sign_cache_ = 2;
  for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
  return r;
}

CycloReal operator*(const CycloReal& a, const CycloReal& b) {
  if (a.ambient_ != b.ambient_) {
    auto [x, y] = aligned(a, b);
    return x * y;
  }
  size_t n = a.coeffs_.size();
  std::vector<mpq_class> prod(2 * n - 1, mpq_class(0));
  for (size_t i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < n; ++j) {
      if (b.coeffs_[j] == 0) continue;
      prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return CycloReal(a.ambient_, std::move(prod));
}

CycloReal CycloReal::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  const ZPoly& psiz = minimal_poly(ambient_);
  QPoly psi(psiz.size());
  for (size_t i = 0; i < psiz.size(); ++i) psi[i] = mpq_class(psiz[i]);
  // Extended Euclid tracking only the multiplier of this->coeffs_.
  QPoly r0 = psi, r1 = coeffs_;
  QPoly t0 = {mpq_class(0)}, t1 = {mpq_class(1)};
  while (qpoly_deg(r1) > 0) {
    QPoly quot;
    QPoly r2 = qpoly_divmod(r0, r1, &quot);
    QPoly t2 = qpoly_sub(t0, qpoly_mul(quot, t1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (qpoly_deg(r1) != 0)
    throw std::logic_error("inverse: gcd with the minimal polynomial");
  mpq_class g = r1[0];
  for (auto& c : t1) c /= g;
  CycloReal inv(ambient_, std::move(t1));
  CycloReal check = *this * inv;
  if (!(check == from_int(1, ambient_)))
    throw std::logic_error("inverse: back-multiplication check failed");
  return inv;
}

CycloReal CycloReal::divided_by(const CycloReal& d) const {
  if (ambient_ != d.ambient_) {
    auto [x, y] = aligned(*this, d);
    return x.divided_by(y);
  }
  return *this * d.inverse();
}

bool CycloReal::operator==(const CycloReal& o) const {
  if (ambient_ == o.ambient_) return coeffs_ == o.coeffs_;
  auto [x, y] = aligned(*this, o);
  return x.coeffs_ == y.coeffs_;
}

double CycloReal::approx() const {
  double c = 2.0 * std::cos(M_PI / (double)ambient_);
  double r = 0.0;
  for (int i = (int)coeffs_.size() - 1; i >= 0; --i)
    r = r * c + coeffs_[i].get_d();
  return r;
}

std::string CycloReal::str() const {
  std::ostringstream os;
  os << ambient_ << '|';
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << ',';
    os << coeffs_[i].get_str();
  }
  return os.str();
}

long lcm_long(long a, long b) { return std::lcm(a, b); }

std::pair<CycloReal, CycloReal> aligned(const CycloReal& a,
                                        const CycloReal& b) {
  long L = lcm_long(a.ambient(), b.ambient());
  return {a.lifted(L), b.lifted(L)};
}

}  // namespace qmut
