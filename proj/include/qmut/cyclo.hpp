// Exact arithmetic in the real cyclotomic fields Q(2cos(pi/N)).
//
// Values are stored as rational-coefficient polynomials in c = 2cos(pi/N),
// reduced modulo the minimal polynomial of c, so equality and zero tests are
// coefficient-vector comparisons.  The sign of a nonzero value is decided by
// evaluating the coefficient polynomial on a certified interval enclosure of
// c, doubling the working precision until the interval excludes zero.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmut {

// Reduced fraction num/den with 0 <= num <= den, standing for the real
// number 2cos(pi*num/den).  Weights of quiver arrows use num/den < 1/2
// (positive values); the obtuse range is used internally by identities.
struct AngleLabel {
  long num = 0;
  long den = 1;

  AngleLabel() = default;
  AngleLabel(long num_, long den_);

  bool operator==(const AngleLabel&) const = default;
  bool operator<(const AngleLabel& o) const {
    return num * o.den < o.num * den;
  }

  double approx() const;     // 2cos(pi*num/den) as a double
  std::string str() const;   // "num/den"

  static AngleLabel parse(const std::string& text);
};

// Minimal polynomial of 2cos(pi/N), monic with integer coefficients,
// lowest degree first.  Degree phi(2N)/2 for N >= 2, and x+2 for N = 1.
// Results are cached per N.
const std::vector<mpz_class>& minimal_poly(long N);
int minimal_poly_degree(long N);

class CycloReal {
 public:
  CycloReal() : ambient_(1), coeffs_(1, mpq_class(0)) {}

  static CycloReal zero(long ambient);
  static CycloReal from_rational(const mpq_class& q, long ambient);
  static CycloReal from_int(long v, long ambient);
  // Generator c = 2cos(pi/ambient).
  static CycloReal generator(long ambient);
  // Value 2cos(pi*lbl.num/lbl.den) in the given ambient.  Requires lbl.den
  // to divide ambient, except for the five rational cosine values
  // (labels 0/1, 1/3, 1/2, 2/3, 1/1) which exist in every ambient.
  static CycloReal from_label(const AngleLabel& lbl, long ambient);

  long ambient() const { return ambient_; }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;

  // Exact sign: -1, 0, +1.  Throws std::logic_error if the certified
  // interval refinement exceeds the precision cap (never expected for
  // canonical representations).
  int sign() const;
  CycloReal abs() const;

  // Recovers the angle label if the value equals 2cos(pi*k/ambient) for
  // some 0 <= k <= ambient or is one of the rational cosine values.
  std::optional<AngleLabel> to_label() const;

  // Re-express in a larger ambient; new_ambient must be a multiple.
  CycloReal lifted(long new_ambient) const;

  CycloReal operator-() const;
  friend CycloReal operator+(const CycloReal& a, const CycloReal& b);
  friend CycloReal operator-(const CycloReal& a, const CycloReal& b);
  friend CycloReal operator*(const CycloReal& a, const CycloReal& b);
  CycloReal& operator+=(const CycloReal& o) { return *this = *this + o; }
  CycloReal& operator-=(const CycloReal& o) { return *this = *this - o; }
  CycloReal& operator*=(const CycloReal& o) { return *this = *this * o; }

  // Exact division (the ring is a field); divisor must be nonzero.  The
  // result is verified by back-multiplication.
  CycloReal divided_by(const CycloReal& d) const;
  CycloReal inverse() const;

  bool operator==(const CycloReal& o) const;
  bool operator!=(const CycloReal& o) const { return !(*this == o); }

  double approx() const;

  // Canonical serialization "ambient|a0,a1,...", suitable as a map key.
  std::string str() const;

 private:
  CycloReal(long ambient, std::vector<mpq_class> coeffs);
  void reduce();

  long ambient_;
  std::vector<mpq_class> coeffs_;  // length = minimal_poly_degree(ambient_)
  // Memoized sign (2 = unknown).  Copies inherit it; shared instances must
  // be warmed before concurrent reads.
  mutable int sign_cache_ = 2;
};

// lcm helper used when aligning ambients.
long lcm_long(long a, long b);

// Aligns two values to the lcm of their ambients.
std::pair<CycloReal, CycloReal> aligned(const CycloReal& a, const CycloReal& b);

}  // namespace qmut
