#pragma once

// Exact integer and rational scalars, vectors, and the error types shared by
// every normwalk module.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace normwalk {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;
using IntMatrix = std::vector<IntVec>;  // row-major
using RatMatrix = std::vector<RatVec>;

/// A point of Z^d.
using LatticePoint = IntVec;
/// A point of Q^d; fractions are kept reduced with positive denominators.
using RationalPoint = RatVec;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration exceeded the configured size cap.
class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scalars

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Returns (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g.
struct ExtendedGcd {
  Integer g, s, t;
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

inline Integer floor(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r),
                   boost::multiprecision::denominator(r));
}

inline Integer ceil(const Rational& r) {
  return ceil_div(boost::multiprecision::numerator(r),
                  boost::multiprecision::denominator(r));
}

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Integer ipow(const Integer& base, unsigned exp) {
  Integer r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

inline std::int64_t to_int64(const Integer& a) {
  if (a > std::numeric_limits<std::int64_t>::max() ||
      a < std::numeric_limits<std::int64_t>::min())
    throw ResourceCapExceeded("integer does not fit in 64 bits: " + a.str());
  return static_cast<std::int64_t>(a);
}

inline std::string to_string(const Integer& a) { return a.str(); }

inline std::string to_string(const Rational& r) {
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

inline Integer parse_integer(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("malformed integer literal");
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9')
      throw std::invalid_argument("malformed integer literal: " +
                                  std::string(s));
  return Integer(std::string(s));
}

/// Accepts "p", "p/q" and "-p/q".
inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(s.substr(0, slash));
  Integer den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(num, den);
}

// ---------------------------------------------------------------------------
// Vectors

inline void require_same_size(std::size_t a, std::size_t b,
                              const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) +
                            " vs " + std::to_string(b));
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  require_same_size(a.size(), b.size(), "dot");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const IntVec& a, const RatVec& b) {
  require_same_size(a.size(), b.size(), "dot");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

template <class T>
std::vector<T> add(const std::vector<T>& a, const std::vector<T>& b) {
  require_same_size(a.size(), b.size(), "add");
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <class T>
std::vector<T> sub(const std::vector<T>& a, const std::vector<T>& b) {
  require_same_size(a.size(), b.size(), "sub");
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class T, class S>
std::vector<T> scale(const std::vector<T>& a, const S& c) {
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
  return r;
}

inline bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

inline Integer content(const IntVec& v) {
  Integer g = 0;
  for (const auto& x : v) {
    g = gcd(g, x);
    if (g == 1) break;
  }
  return g;
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
inline IntVec primitive(IntVec v) {
  Integer g = content(v);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

inline RatVec to_rational(const IntVec& v) {
  return RatVec(v.begin(), v.end());
}

/// Clears denominators: returns (L, L*v) with L the lcm of the denominators.
inline std::pair<Integer, IntVec> clear_denominators(const RatVec& v) {
  Integer l = 1;
  for (const auto& x : v) {
    Integer den = boost::multiprecision::denominator(x);
    l = l / gcd(l, den) * den;
  }
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    r[i] = boost::multiprecision::numerator(v[i]) *
           (l / boost::multiprecision::denominator(v[i]));
  return {l, r};
}

inline IntVec unit_vector(std::size_t d, std::size_t i) {
  IntVec e(d, 0);
  e[i] = 1;
  return e;
}

inline std::string to_string(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s + ")";
}

inline std::string to_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Enumeration cap

/// Upper bound on the number of points any single enumeration may visit.
/// Read once from NORMWALK_MAX_POINTS; defaults to 20 million.
inline std::uint64_t enumeration_cap() {
  static const std::uint64_t cap = [] {
    const char* env = std::getenv("NORMWALK_MAX_POINTS");
    if (env == nullptr || *env == '\0') return std::uint64_t{20'000'000};
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }();
  return cap;
}

}  // namespace normwalk
