#pragma once

// Exact rational arithmetic for the whole library.  Backed by GMP's mpq_class;
// every stored value is in canonical reduced form with positive denominator,
// which makes string round-trips ("p/q" or "p") byte-stable.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace tropgraph {

using Rat = mpq_class;

// n/d reduced, d > 0.  Throws on d == 0.
inline Rat rat(long n, long d = 1) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(n, d);
  q.canonicalize();
  return q;
}

// Strict parser for the wire format: optional '-', digits, optional "/digits".
// Whitespace is not accepted; the denominator must be positive and nonzero.
Rat parse_rat(const std::string& s);

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }
inline Rat rat_abs(const Rat& a) { return a < 0 ? Rat(-a) : a; }

// Round q to the nearest rational with denominator <= cap (cap >= 1), via the
// Stern-Brocot / continued-fraction best approximation.  If q's denominator is
// already <= cap the result is q itself.
Rat round_denominator(const Rat& q, unsigned long cap);

// Best rational reconstruction of a double, trying denominator caps in
// increasing order.  Used by the round-and-verify game solver; callers must
// re-verify the result exactly.
Rat rat_from_double(double x, unsigned long den_cap);

// Rational (min,+) scalar: a finite rational or +infinity.  Infinity is the
// neutral element of min and absorbing for +.
struct Trop {
  bool inf = false;
  Rat v;  // meaningful only when !inf

  Trop() : inf(false), v(0) {}
  Trop(const Rat& q) : inf(false), v(q) {}  // NOLINT: implicit by design
  Trop(long n) : inf(false), v(n) {}        // NOLINT
  static Trop infinity() {
    Trop t;
    t.inf = true;
    return t;
  }

  bool finite() const { return !inf; }
  const Rat& value() const {
    if (inf) throw std::logic_error("value() on infinite tropical scalar");
    return v;
  }

  friend Trop operator+(const Trop& a, const Trop& b) {
    if (a.inf || b.inf) return infinity();
    return Trop(Rat(a.v + b.v));
  }
  friend bool operator==(const Trop& a, const Trop& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.v == b.v;
  }
  friend bool operator!=(const Trop& a, const Trop& b) { return !(a == b); }
  // Total order with infinity as the top element.
  friend bool operator<(const Trop& a, const Trop& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    return a.v < b.v;
  }
  friend bool operator<=(const Trop& a, const Trop& b) { return !(b < a); }
};

inline Trop trop_min(const Trop& a, const Trop& b) { return a < b ? a : b; }

std::string trop_str(const Trop& t);      // "p/q" or "inf"
Trop parse_trop(const std::string& s);

// min and max entry of a nonempty vector.
Rat vec_min(const std::vector<Rat>& x);
Rat vec_max(const std::vector<Rat>& x);

}  // namespace tropgraph
