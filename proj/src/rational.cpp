#include "tropgraph/rational.hpp"

#include <cctype>
#include <cmath>

namespace tropgraph {

Rat parse_rat(const std::string& s) {
  auto fail = [&]() -> Rat {
    throw std::invalid_argument("malformed rational '" + s + "'");
  };
  if (s.empty()) return fail();
  std::size_t i = 0;
  if (s[i] == '-') ++i;
  std::size_t num_begin = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == num_begin) return fail();
  std::string num = s.substr(0, i);
  std::string den = "1";
  if (i < s.size()) {
    if (s[i] != '/') return fail();
    ++i;
    std::size_t den_begin = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == den_begin || i != s.size()) return fail();
    den = s.substr(den_begin);
  }
  mpz_class n(num), d(den);
  if (d == 0) return fail();
  Rat q(n);
  q /= Rat(d);
  return q;
}

Rat round_denominator(const Rat& q, unsigned long cap) {
  if (cap < 1) throw std::invalid_argument("denominator cap must be >= 1");
  if (q.get_den() <= cap) return q;
  // Continued-fraction expansion of q, truncated as soon as the convergent's
  // denominator would exceed the cap; the last admissible convergent (with a
  // possibly reduced final partial quotient) is the best approximation.
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // convergents h_{-1}/k_{-1}, h_0/k_0 seeds
  mpz_class num = q.get_num(), den = q.get_den();
  while (den != 0) {
    mpz_class a = num / den;  // floor toward -inf needed for negatives
    if (num < 0 && num % den != 0) a -= 1;
    mpz_class p2 = a * p1 + p0;
    mpz_class q2 = a * q1 + q0;
    if (q2 > cap) {
      // Reduce the final partial quotient so the denominator fits the cap.
      if (q1 == 0) throw std::logic_error("denominator rounding underflow");
      mpz_class slack = (mpz_class(cap) - q0) / q1;
      mpz_class p_alt = slack * p1 + p0;
      mpz_class q_alt = slack * q1 + q0;
      // Prefer whichever of the previous convergent / reduced semiconvergent
      // is closer; ties go to the smaller denominator (the convergent).
      Rat prev(p1, q1), alt(p_alt, q_alt);
      prev.canonicalize();
      if (q_alt <= 0) return prev;
      alt.canonicalize();
      Rat dp = rat_abs(Rat(q - prev)), da = rat_abs(Rat(q - alt));
      return da < dp ? alt : prev;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpz_class r = num - a * den;
    num = den;
    den = r;
  }
  Rat out(p1, q1);
  out.canonicalize();
  return out;
}

Rat rat_from_double(double x, unsigned long den_cap) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  // Exact binary expansion of the double, then round to the cap.
  mpq_class exact(x);
  return round_denominator(Rat(exact), den_cap);
}

std::string trop_str(const Trop& t) { return t.inf ? "inf" : rat_str(t.v); }

Trop parse_trop(const std::string& s) {
  if (s == "inf") return Trop::infinity();
  return Trop(parse_rat(s));
}

Rat vec_min(const std::vector<Rat>& x) {
  if (x.empty()) throw std::invalid_argument("min of empty vector");
  Rat m = x[0];
  for (const Rat& e : x)
    if (e < m) m = e;
  return m;
}

Rat vec_max(const std::vector<Rat>& x) {
  if (x.empty()) throw std::invalid_argument("max of empty vector");
  Rat m = x[0];
  for (const Rat& e : x)
    if (m < e) m = e;
  return m;
}

}  // namespace tropgraph
